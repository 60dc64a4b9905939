#include "nbwalk/budget.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#include "nbwalk/errors.hpp"

namespace nbwalk {

namespace {

std::size_t parse_size(std::string_view token) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
        throw InvalidArgument("budget: not a nonnegative integer: '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

Budgets Budgets::parse(std::string_view text) {
    Budgets b;
    if (text.empty()) return b;
    if (text.find('=') == std::string_view::npos) {
        b.max_vertices = parse_size(text);
        return b;
    }
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);

        auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument("budget: expected key=value, got '" + std::string(item) + "'");
        }
        auto key = item.substr(0, eq);
        auto value = parse_size(item.substr(eq + 1));
        if (key == "vertices") b.max_vertices = value;
        else if (key == "oracle_depth") b.oracle_depth = value;
        else if (key == "oracle_vertices") b.oracle_vertices = value;
        else if (key == "dp_states") b.dp_states = value;
        else if (key == "dp_max_dim") b.dp_max_dim = value;
        else throw InvalidArgument("budget: unknown key '" + std::string(key) + "'");
    }
    return b;
}

Budgets Budgets::from_env() {
    const char* env = std::getenv("NBWALK_BUDGET");
    return env ? parse(env) : Budgets{};
}

}  // namespace nbwalk

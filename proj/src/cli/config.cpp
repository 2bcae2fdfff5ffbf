#include "kakeya/cli/config.hpp"

#include "kakeya/error.hpp"
#include "kakeya/formats.hpp"
#include "kakeya/generators.hpp"
#include "kakeya/grid.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace kakeya::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (true) {
        const auto j = s.find(',', i);
        out.push_back(trim(s.substr(i, j == std::string::npos ? std::string::npos : j - i)));
        if (j == std::string::npos) break;
        i = j + 1;
    }
    return out;
}

} // namespace

Config Config::parse(const std::string& text) {
    Config c;
    int line = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        ++line;
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string s = text.substr(start, end - start);
        start = end + 1;
        if (const auto hash = s.find('#'); hash != std::string::npos) s.resize(hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "empty key");
        for (char ch : key)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
                throw ParseError(line, "invalid key '" + key + "'");
        if (value.empty()) throw ParseError(line, "empty value for '" + key + "'");
        if (c.has(key)) throw ParseError(line, "duplicate key '" + key + "'");
        c.set(key, value);
    }
    return c;
}

Config Config::load(const std::string& path) { return parse(read_file(path)); }

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

Params::Params(const Config& c, std::string scenario) : config_(c), scenario_(std::move(scenario)) {
    if (c.has("scenario") && c.entries().at("scenario") != scenario_)
        throw Error("config is for scenario '" + c.entries().at("scenario") + "', not '" + scenario_ + "'");
    used_.insert("scenario");
}

const std::string& Params::raw(const std::string& key) {
    used_.insert(key);
    const auto it = config_.entries().find(key);
    if (it == config_.entries().end()) throw Error("scenario '" + scenario_ + "' needs config key '" + key + "'");
    return it->second;
}

std::string Params::str(const std::string& key) { return raw(key); }

std::int64_t Params::integer(const std::string& key) {
    const auto& s = raw(key);
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error("config key '" + key + "' needs an integer");
    return v;
}

double Params::real(const std::string& key) {
    const auto& s = raw(key);
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw Error("config key '" + key + "' needs a number");
    return v;
}

bool Params::flag(const std::string& key) {
    const auto& s = raw(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw Error("config key '" + key + "' needs true or false");
}

std::vector<double> Params::reals(const std::string& key) {
    std::vector<double> out;
    for (const auto& t : split_list(raw(key))) {
        double v = 0;
        const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || p != t.data() + t.size())
            throw Error("config key '" + key + "' needs a comma-separated list of numbers");
        out.push_back(v);
    }
    return out;
}

std::vector<int> Params::integers(const std::string& key) {
    std::vector<int> out;
    for (const auto& t : split_list(raw(key))) {
        int v = 0;
        const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || p != t.data() + t.size())
            throw Error("config key '" + key + "' needs a comma-separated list of integers");
        out.push_back(v);
    }
    return out;
}

int Params::resolution(const std::string& key) {
    const auto k = integer(key);
    if (k < 1 || k > max_generator_k) throw Error("config key '" + key + "' must lie in [1, 9]");
    return static_cast<int>(k);
}

double Params::dyadic(const std::string& key) {
    const double v = real(key);
    try {
        if (dyadic_exponent(v) < 0) throw Error("above 1");
    } catch (const Error&) {
        throw Error("config key '" + key + "' must be a dyadic scale 2^-j <= 1");
    }
    return v;
}

std::string Params::str_or(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto it = config_.entries().find(key);
    return it == config_.entries().end() ? fallback : it->second;
}

std::optional<std::string> Params::maybe(const std::string& key) {
    used_.insert(key);
    const auto it = config_.entries().find(key);
    if (it == config_.entries().end()) return std::nullopt;
    return it->second;
}

void Params::finish() const {
    for (const auto& [k, v] : config_.entries())
        if (!used_.count(k)) throw Error("unknown config key '" + k + "' for scenario '" + scenario_ + "'");
}

} // namespace kakeya::cli

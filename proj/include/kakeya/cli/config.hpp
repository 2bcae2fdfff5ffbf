#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kakeya::cli {

// key = value lines, '#' starts a comment
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const std::map<std::string, std::string>& entries() const { return entries_; }

    // sorted key=value lines
    std::string canonical() const;

private:
    std::map<std::string, std::string> entries_;
};

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t x);

// Typed reads that remember which keys were used; finish() rejects the rest.
class Params {
public:
    Params(const Config& c, std::string scenario);

    std::string str(const std::string& key);
    std::int64_t integer(const std::string& key);
    double real(const std::string& key);
    bool flag(const std::string& key);
    std::vector<double> reals(const std::string& key);
    std::vector<int> integers(const std::string& key);
    int resolution(const std::string& key);   // integer k with 1 <= k <= 9
    double dyadic(const std::string& key);    // 2^-j, j >= 0

    // output-only settings may default; physics parameters may not
    std::string str_or(const std::string& key, const std::string& fallback);
    std::optional<std::string> maybe(const std::string& key);

    void finish() const;
    const std::string& scenario() const { return scenario_; }

private:
    const std::string& raw(const std::string& key);

    const Config& config_;
    std::string scenario_;
    std::set<std::string> used_;
};

} // namespace kakeya::cli

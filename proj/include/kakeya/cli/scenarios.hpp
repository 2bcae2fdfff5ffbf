#pragma once

#include "kakeya/cli/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kakeya::cli {

constexpr int report_version = 1;

enum class Format { report, csv };

struct RunOptions {
    std::optional<std::uint64_t> seed;  // overrides the config's seed key
    Format format = Format::report;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<Table> tables;

    void add(const std::string& key, const std::string& value) { fields.emplace_back(key, value); }
    void add(const std::string& key, double value);
    void add(const std::string& key, std::int64_t value);
    void add(const std::string& key, std::size_t value) { add(key, static_cast<std::int64_t>(value)); }
    void add(const std::string& key, int value) { add(key, static_cast<std::int64_t>(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
};

// gen cover mlk planemap grains swtest twoends kaufman smooth twist probe
const std::vector<std::string>& scenario_names();

// the full output text; identical for identical (config, seed) at any worker count
std::string run_scenario(const std::string& name, const Config& config, const RunOptions& options);

struct SelftestResult {
    std::string text;   // one PASS/FAIL line per invariant
    bool ok = true;
};

// inject_fault adds a shading cell outside its tube to one fixture
SelftestResult selftest(bool inject_fault);

} // namespace kakeya::cli

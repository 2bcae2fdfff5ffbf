#pragma once

#include "kakeya/hypergraph.hpp"
#include "kakeya/smoothing.hpp"
#include "kakeya/tubes.hpp"

#include <string>

namespace kakeya {

constexpr int kgs_version = 1;
constexpr int ktf_version = 1;
constexpr int khg_version = 1;
constexpr int krf_version = 1;
constexpr int csv_version = 1;

// %.12g, '.' decimal separator
std::string format_number(double x);
// %.12f, used for line parameters in KTF
std::string format_fixed(double x);

// kgs 1 <n> <k>, then one strictly increasing cell per line
std::string write_kgs(const CellSet& e);
CellSet read_kgs(const std::string& text);

// ktf 1 <n> <k> <count>, then per tube: line <p...> <v...> followed by a KGS block
std::string write_ktf(const TubeFamily& f);
TubeFamily read_ktf(const std::string& text);

// khg 1 <k>, a line of part sizes, then one edge per line
std::string write_khg(const hypergraph::KPartiteHypergraph& g);
hypergraph::KPartiteHypergraph read_khg(const std::string& text);

// krf 1 <N> <k> <eta>, then one rectangle per line: level cx cy slope parent
std::string write_krf(const NestedRectangleFamily& fam);
NestedRectangleFamily read_krf(const std::string& text);

// CSV tables; the first line names the payload: "# kgs n=.. k=..", "# khg k=.. parts=a;b;..",
// "# ktf n=.. k=.. count=.."
std::string kgs_to_csv(const CellSet& e);
std::string khg_to_csv(const hypergraph::KPartiteHypergraph& g);
std::string ktf_to_csv(const TubeFamily& f);
CellSet csv_to_kgs(const std::string& text);
hypergraph::KPartiteHypergraph csv_to_khg(const std::string& text);
TubeFamily csv_to_ktf(const std::string& text);

// formats: kgs, ktf, khg, csv; a CSV source is dispatched on its first line
std::string convert_text(const std::string& text, const std::string& from, const std::string& to);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

} // namespace kakeya

#include "kakeya/cli/config.hpp"
#include "kakeya/cli/scenarios.hpp"
#include "kakeya/error.hpp"
#include "kakeya/formats.hpp"
#include "kakeya/parallel.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::string format = "report";
    std::string out;
};

void add_common(CLI::App* sub, Flags& f, bool needs_config) {
    auto* c = sub->add_option("--config", f.config, "key = value config file");
    if (needs_config) c->required();
    sub->add_option("--seed", f.seed, "seed (overrides the config's seed key)");
    sub->add_option("--workers", f.workers, "worker threads; outputs do not depend on it")->check(CLI::Range(1, 256));
    sub->add_option("--format", f.format, "csv or report")->check(CLI::IsMember({"csv", "report"}));
    sub->add_option("--out", f.out, "output path (default stdout)");
}

void emit(const Flags& f, const std::string& text) {
    if (f.out.empty())
        std::cout << text;
    else
        kakeya::write_file(f.out, text);
}

const char* scenario_help(const std::string& name) {
    if (name == "gen") return "generate a tube family and report extremality (keys: generator k [n|branching] eps sigma seed)";
    if (name == "cover") return "covering numbers across dyadic rho (keys: set k | generator.. | path)";
    if (name == "mlk") return "multilinear and Cordoba functionals (keys: generator k [n|branching] seed)";
    if (name == "planemap") return "broad/narrow plane map (keys: family keys, wedge_threshold count_threshold)";
    if (name == "grains") return "plane map plus grain decomposition (keys: planemap keys, rho alpha)";
    if (name == "swtest") return "SW dichotomy verdict (keys: construction k eps eta [size seed])";
    if (name == "twoends") return "two-ends, renormalize, coarsen, thin tubes (keys: k set density zeta renorm_eps rho alpha K alpha_budget seed)";
    if (name == "kaufman") return "Kaufman direction selection (keys: k set r h_density [size seed])";
    if (name == "smooth") return "C2 reconstruction from a traced rectangle family (keys: function N k eta lo hi samples_per_rect [plot_points])";
    if (name == "twist") return "twisted projection of a family (keys: family keys, f dilate)";
    if (name == "probe") return "twisted-projection probe table k,tubes,image_measure,l32_norm,log_ratio (keys: generator f ks seed)";
    return "";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kakeya: discretized Kakeya experiments"};
    app.require_subcommand(1);

    Flags flags;
    std::string subcommand;
    for (const auto& name : kakeya::cli::scenario_names()) {
        auto* sub = app.add_subcommand(name, scenario_help(name));
        add_common(sub, flags, true);
        sub->callback([&subcommand, name] { subcommand = name; });
    }

    std::string in_path, out_path, from, to;
    auto* conv = app.add_subcommand("convert", "convert between kgs, ktf, khg and csv");
    conv->add_option("IN", in_path)->required();
    conv->add_option("OUT", out_path)->required();
    conv->add_option("--from", from)->required()->check(CLI::IsMember({"kgs", "ktf", "khg", "csv"}));
    conv->add_option("--to", to)->required()->check(CLI::IsMember({"kgs", "ktf", "khg", "csv"}));
    conv->callback([&] { subcommand = "convert"; });

    bool inject_fault = false;
    auto* self = app.add_subcommand("selftest", "property suite at k <= 5");
    self->add_flag("--inject-fault", inject_fault, "add a shading cell outside its tube");
    self->add_option("--workers", flags.workers)->check(CLI::Range(1, 256));
    self->callback([&] { subcommand = "selftest"; });

    CLI11_PARSE(app, argc, argv);

    try {
        kakeya::set_worker_count(flags.workers);
        if (subcommand == "convert") {
            kakeya::write_file(out_path, kakeya::convert_text(kakeya::read_file(in_path), from, to));
            return 0;
        }
        if (subcommand == "selftest") {
            const auto r = kakeya::cli::selftest(inject_fault);
            std::cout << r.text;
            return r.ok ? 0 : 1;
        }
        const auto config = kakeya::cli::Config::load(flags.config);
        kakeya::cli::RunOptions opt;
        opt.seed = flags.seed;
        opt.format = flags.format == "csv" ? kakeya::cli::Format::csv : kakeya::cli::Format::report;
        emit(flags, kakeya::cli::run_scenario(subcommand, config, opt));
    } catch (const kakeya::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

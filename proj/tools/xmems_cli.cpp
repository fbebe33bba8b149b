// xmems: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 invalid state, 4 oracle or
// boundary check failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "xmems/xmems.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kInvalidState = 3, kCheckFailed = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Output file or stdout when the path is empty or "-".
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw IoError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw IoError("write failed");
    }

  private:
    std::unique_ptr<std::ofstream> file_;
};

struct CliConfig {
    int n_qubits = 3;
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
    double gamma = 0.0;
    double phase = 0.0;
    int grid = 0;
    int max_n = 20;
    unsigned shards = 1;
    std::string distribution = "flat-simplex";
    std::string input_path;
    std::string output_path;
    std::string format = "csv";
};

int run_sweep(const CliConfig& cfg) {
    const auto dist = cfg.distribution == "ghz-admixture" ? xmems::DiagonalDistribution::ghz_admixture
                                                          : xmems::DiagonalDistribution::flat_simplex;
    const xmems::SamplerConfig sampler(cfg.n_qubits, cfg.count, cfg.seed, dist);
    Output out(cfg.output_path);
    auto& os = out.stream();
    os << xmems::kSweepCsvHeader << '\n';

    std::uint64_t entangled = 0, boundary_violations = 0, critical_violations = 0;
    double max_entropy_entangled = 0.0;
    xmems::sweep(
        sampler,
        [&](const xmems::SweepRecord& r) {
            xmems::write_csv_row(os, r);
            if (r.concurrence > 0.0) {
                ++entangled;
                max_entropy_entangled = std::max(max_entropy_entangled, r.entropy);
            }
            boundary_violations += xmems::violates_boundary(cfg.n_qubits, r);
            critical_violations += xmems::violates_critical_entropy(cfg.n_qubits, r);
        },
        cfg.shards);
    out.finish();

    const nlohmann::json summary{{"count", cfg.count},
                                 {"entangled", entangled},
                                 {"max_entropy_entangled", max_entropy_entangled},
                                 {"critical_entropy", xmems::critical_entropy(cfg.n_qubits)},
                                 {"boundary_violations", boundary_violations},
                                 {"critical_violations", critical_violations}};
    std::cerr << summary.dump() << '\n';
    return boundary_violations == 0 && critical_violations == 0 ? kOk : kCheckFailed;
}

int run_boundary(const CliConfig& cfg) {
    Output out(cfg.output_path);
    auto& os = out.stream();
    nlohmann::json rows = nlohmann::json::array();
    if (cfg.format == "csv") os << "concurrence,entropy\n";
    for (int k = 0; k < cfg.grid; ++k) {
        const double gamma = k + 1 == cfg.grid ? 0.5 : 0.5 * k / static_cast<double>(cfg.grid - 1);
        const double s = xmems::boundary_entropy(cfg.n_qubits, gamma);
        if (cfg.format == "csv") {
            os << xmems::format_double(2.0 * gamma) << ',' << xmems::format_double(s) << '\n';
        } else {
            rows.push_back({{"concurrence", 2.0 * gamma}, {"entropy", s}});
        }
    }
    if (cfg.format == "json") os << rows.dump() << '\n';
    out.finish();
    return kOk;
}

int run_scr(const CliConfig& cfg) {
    Output out(cfg.output_path);
    auto& os = out.stream();
    nlohmann::json rows = nlohmann::json::array();
    if (cfg.format == "csv") os << "n,fraction,decimal\n";
    for (int n = 2; n <= cfg.max_n; ++n) {
        const auto fr = xmems::critical_entropy_exact(n);
        const double dec = xmems::critical_entropy(n);
        if (cfg.format == "csv") {
            os << n << ',' << fr.numerator << '/' << fr.denominator << ',' << xmems::format_double(dec) << '\n';
        } else {
            rows.push_back(
                {{"n", n}, {"numerator", fr.numerator}, {"denominator", fr.denominator}, {"decimal", dec}});
        }
    }
    if (cfg.format == "json") os << rows.dump() << '\n';
    out.finish();
    return kOk;
}

int run_mems(const CliConfig& cfg) {
    const auto ms = xmems::mems_state(cfg.n_qubits, std::polar(cfg.gamma, cfg.phase));
    Output out(cfg.output_path);
    nlohmann::json doc = xmems::io::to_json(ms.point);
    doc["state"] = xmems::io::state_to_json(ms.state);
    out.stream() << doc.dump() << '\n';
    out.finish();
    return kOk;
}

int run_measure(const CliConfig& cfg) {
    std::string text;
    if (cfg.input_path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(cfg.input_path, std::ios::binary);
        if (!in) throw IoError("cannot read '" + cfg.input_path + "'");
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    xmems::XState state = [&] {
        try {
            return xmems::io::parse_state(text);
        } catch (const xmems::StructuralError& e) {
            throw xmems::io::FormatError(e.what());
        }
    }();

    Output out(cfg.output_path);
    const auto report = xmems::validate(state);
    if (!report.ok()) {
        out.stream() << nlohmann::json{{"valid", false}, {"violations", xmems::io::to_json(report)}}.dump()
                     << '\n';
        out.finish();
        return kInvalidState;
    }
    const auto m = xmems::measure(state);
    out.stream() << nlohmann::json{{"entropy", m.entropy},
                                   {"concurrence", m.concurrence},
                                   {"argmax_index", m.argmax_index},
                                   {"valid", true}}
                        .dump()
                 << '\n';
    out.finish();
    return kOk;
}

int run_verify(const CliConfig& cfg) {
    const auto reports = xmems::oracle::run_suite(cfg.n_qubits, cfg.count, cfg.seed);
    Output out(cfg.output_path);
    bool all = true;
    for (const auto& r : reports) {
        out.stream() << xmems::io::to_json(r).dump() << '\n';
        all = all && r.passed;
    }
    out.finish();
    return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"X-state entanglement/entropy toolkit"};
    app.require_subcommand(1);
    CliConfig cfg;

    const auto n_opt = [&](CLI::App* sub) {
        return sub->add_option("--n", cfg.n_qubits, "number of qubits")->check(CLI::Range(2, 24));
    };
    const auto out_opt = [&](CLI::App* sub) {
        sub->add_option("-o,--output", cfg.output_path, "output file (default stdout)");
    };
    const auto fmt_opt = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* sweep = app.add_subcommand("sweep", "Monte Carlo entanglement/entropy sweep (CSV)");
    n_opt(sweep)->required();
    sweep->add_option("--count", cfg.count, "number of samples")->required()->check(CLI::PositiveNumber);
    sweep->add_option("--seed", cfg.seed, "master seed");
    sweep->add_option("--shards", cfg.shards, "worker threads")->check(CLI::Range(1u, 256u));
    sweep->add_option("--distribution", cfg.distribution, "flat-simplex or ghz-admixture")
        ->check(CLI::IsMember({"flat-simplex", "ghz-admixture"}));
    out_opt(sweep);

    auto* boundary = app.add_subcommand("boundary", "boundary curve: max entropy per concurrence");
    n_opt(boundary)->required();
    boundary->add_option("--grid", cfg.grid, "number of points")->required()->check(CLI::Range(2, 100000000));
    out_opt(boundary);
    fmt_opt(boundary);

    auto* mems = app.add_subcommand("mems", "build the boundary state for a given |gamma|");
    n_opt(mems)->required();
    mems->add_option("--gamma", cfg.gamma, "|gamma| in [0, 1/2]")->required()->check(CLI::Range(0.0, 0.5));
    mems->add_option("--phase", cfg.phase, "phase of gamma (radians)");
    out_opt(mems);

    auto* scr = app.add_subcommand("scr", "critical entropy table");
    scr->add_option("--max-n", cfg.max_n, "largest N")->check(CLI::Range(2, 30));
    out_opt(scr);
    fmt_opt(scr);

    auto* meas = app.add_subcommand("measure", "measures of a JSON state file");
    meas->add_option("--input,-i", cfg.input_path, "state file ('-' for stdin)")->required();
    out_opt(meas);

    auto* verify = app.add_subcommand("verify", "run the oracle suite on a random corpus");
    verify->add_option("--n", cfg.n_qubits, "number of qubits")->required()->check(CLI::Range(2, 24));
    cfg.count = 1000;
    cfg.seed = 1;
    verify->add_option("--count", cfg.count, "corpus size per distribution")->check(CLI::PositiveNumber);
    verify->add_option("--seed", cfg.seed, "master seed");
    out_opt(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*sweep) return run_sweep(cfg);
        if (*boundary) return run_boundary(cfg);
        if (*mems) return run_mems(cfg);
        if (*scr) return run_scr(cfg);
        if (*meas) return run_measure(cfg);
        if (*verify) return run_verify(cfg);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const xmems::io::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const xmems::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const xmems::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

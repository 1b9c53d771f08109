// Copyright 2026 The Fractonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "fractonlab/cli/commands.h"

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "fractonlab/cli/config.h"
#include "fractonlab/cli/run_dir.h"
#include "fractonlab/code_model.h"
#include "fractonlab/duality.h"
#include "fractonlab/ensemble.h"
#include "fractonlab/oracle_suite.h"
#include "fractonlab/sm_map.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fractonlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char *kTableMagic = "# FRACTONLAB-TABLE 1";
constexpr const char *kDiagnosticsMagic = "# FRACTONLAB-DIAGNOSTICS 1";
constexpr const char *kToolVersion = "1.0.0";

std::string num(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void on_signal(int) {
    stop_requested().store(true);
}

class SignalScope {
   public:
    SignalScope() {
        stop_requested().store(false);
        old_int_ = std::signal(SIGINT, on_signal);
        old_term_ = std::signal(SIGTERM, on_signal);
    }
    ~SignalScope() {
        std::signal(SIGINT, old_int_);
        std::signal(SIGTERM, old_term_);
    }

   private:
    void (*old_int_)(int);
    void (*old_term_)(int);
};

std::string with_magic(const char *magic, const json &j) {
    return std::string(magic) + "\n" + j.dump() + "\n";
}

json parse_with_magic(const std::string &text, const char *magic, const std::string &what) {
    size_t eol = text.find('\n');
    if (eol == std::string::npos || text.substr(0, eol) != magic) {
        throw std::invalid_argument(what + " does not start with '" + magic + "'.");
    }
    return json::parse(text.substr(eol + 1));
}

// ---------------------------------------------------------------- run outputs

std::string format_table(const EnsembleConfig &c, const EnsembleResult &r) {
    std::ostringstream out;
    out << kTableMagic << "\n";
    out << "# code=" << code_kind_name(c.code) << " sector=" << pauli_type_name(c.sector) << " L=" << c.lattice_size
        << " p=" << num(c.p) << " N_d=" << r.realizations << " N_d_effective=" << r.effective_realizations
        << " excluded=";
    for (size_t k = 0; k < r.excluded.size(); k++) {
        out << (k ? "," : "") << r.excluded[k];
    }
    out << "\n";
    out << "# beta: inverse temperature [1/J]; energy: disorder-averaged <E> [J]; specific_heat: C_V per spin;"
           " order_parameter: O = -E/N_c [1]; susceptibility: chi_O [1/J]; xi: second-moment correlation length"
           " [lattice units], nan when undefined; *_err: jackknife errors over realizations\n";
    out << "beta\tenergy\tenergy_err\tspecific_heat\tspecific_heat_err\torder_parameter\torder_parameter_err"
           "\tsusceptibility\tsusceptibility_err\txi\txi_err\n";
    for (const auto &rec : r.records) {
        double xi = rec.xi ? rec.xi->value : std::nan("");
        double xi_err = rec.xi ? rec.xi->error : std::nan("");
        out << num(rec.beta) << '\t' << num(rec.energy.value) << '\t' << num(rec.energy.error) << '\t'
            << num(rec.specific_heat.value) << '\t' << num(rec.specific_heat.error) << '\t'
            << num(rec.order_parameter.value) << '\t' << num(rec.order_parameter.error) << '\t'
            << num(rec.susceptibility.value) << '\t' << num(rec.susceptibility.error) << '\t' << num(xi) << '\t'
            << num(xi_err) << '\n';
    }
    return out.str();
}

std::string format_diagnostics(const EnsembleProgress &progress) {
    std::ostringstream out;
    out << kDiagnosticsMagic << "\n";
    out << "# one row per realization; swap acceptance is per adjacent ladder pair, '-' when none was proposed\n";
    out << "realization\tequilibrated\ttau_first\tnegative_couplings\troundtrips\tswap_acceptance\tdiagnostic\n";
    for (const auto &[idx, b] : progress.completed) {
        uint64_t trips = 0;
        for (uint64_t t : b.roundtrips) {
            trips += t;
        }
        out << idx << '\t' << (b.equilibration.equilibrated ? "yes" : "no") << '\t' << b.equilibration.tau_first
            << '\t' << b.negative_couplings << '\t' << trips << '\t';
        for (size_t k = 0; k < b.swaps_proposed.size(); k++) {
            out << (k ? "," : "");
            if (b.swaps_proposed[k] == 0) {
                out << '-';
            } else {
                out << num((double)b.swaps_accepted[k] / (double)b.swaps_proposed[k]);
            }
        }
        out << '\t' << (b.equilibration.diagnostic.empty() ? "-" : b.equilibration.diagnostic) << '\n';
    }
    return out.str();
}

std::string slot_name(size_t slot) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "slot_%03zu.txt", slot);
    return buf;
}

class RunExecutor {
   public:
    RunExecutor(fs::path run_dir, RunManifest &manifest, std::ostream &out, std::ostream &err)
        : run_dir_(std::move(run_dir)), manifest_(manifest), out_(out), err_(err) {
    }

    uint64_t sweep_budget = 0;
    Execution exec = Execution::kParallel;

    /// Returns an exit code.
    int execute(const RunConfig &rc, bool fresh) {
        bool quorum_failed = false;
        for (const auto &c : rc.ensembles) {
            int code = execute_one(c, fresh);
            if (code == kExitInterrupted) {
                manifest_.set_status("interrupted");
                manifest_.write();
                err_ << "Interrupted; checkpoint written. Continue with: fractonlab resume " << run_dir_.string()
                     << "\n";
                return code;
            }
            quorum_failed |= code == kExitQuorum;
        }
        manifest_.set_status(quorum_failed ? "quorum-not-met" : "complete");
        manifest_.write();
        return quorum_failed ? kExitQuorum : kExitOk;
    }

   private:
    fs::path rel_checkpoint(const std::string &tag) const {
        return fs::path("checkpoints") / (tag + ".json");
    }

    void write_tracked(const fs::path &rel, const std::string &content) {
        atomic_write(run_dir_ / rel, content);
        manifest_.track(rel);
    }

    int execute_one(const EnsembleConfig &c, bool fresh) {
        std::string tag = ensemble_tag(c);
        fs::path ckpt = rel_checkpoint(tag);
        EnsembleProgress progress;
        if (!fresh && fs::exists(run_dir_ / ckpt)) {
            progress = checkpoint_from_json(c, parse_with_magic(read_file(run_dir_ / ckpt), kCheckpointMagic, ckpt.string()));
        } else {
            progress = start_ensemble(c, exec);
            if (progress.ladder_tuned && !progress.tuning_converged) {
                err_ << "warning: " << tag << ": ladder tuning did not reach the acceptance band; using the best ladder found\n";
            }
        }

        RunControl control;
        control.stop = &stop_requested();
        control.sweep_budget = sweep_budget;
        control.exec = exec;
        control.on_complete = [&](const RealizationBundle &b) {
            char name[40];
            std::snprintf(name, sizeof(name), "realization_%05u.json", b.realization);
            write_tracked(fs::path("bundles") / tag / name, with_magic(kBundleMagic, bundle_to_json(b)));
        };
        bool complete = run_ensemble(c, progress, control);
        write_tracked(ckpt, with_magic(kCheckpointMagic, checkpoint_to_json(c, progress)));
        if (!complete) {
            return kExitInterrupted;
        }
        return write_results(c, tag, progress);
    }

    int write_results(const EnsembleConfig &c, const std::string &tag, const EnsembleProgress &progress) {
        write_tracked(fs::path("diagnostics") / (tag + ".tsv"), format_diagnostics(progress));
        std::vector<RealizationBundle> bundles;
        for (const auto &[idx, b] : progress.completed) {
            bundles.push_back(b);
        }
        json summary{{"ladder", progress.ladder.betas}, {"ladder_tuned", progress.ladder_tuned}};
        EnsembleResult result;
        try {
            result = aggregate(c, bundles);
        } catch (const std::runtime_error &e) {
            summary["status"] = "quorum-not-met";
            summary["error"] = e.what();
            manifest_.set_summary(tag, summary);
            err_ << tag << ": " << e.what() << "\n";
            return kExitQuorum;
        }
        write_tracked(fs::path("tables") / (tag + ".tsv"), format_table(c, result));
        for (size_t s = 0; s < result.records.size(); s++) {
            EnergyHistogram summed;
            bool first = true;
            for (const auto &b : bundles) {
                if (!b.equilibration.equilibrated) {
                    continue;
                }
                summed = first ? b.slots[s].histogram : merge_histograms(summed, b.slots[s].histogram);
                first = false;
            }
            std::ostringstream hist;
            write_histogram_text(summed, hist);
            write_tracked(fs::path("histograms") / tag / slot_name(s), hist.str());
            if (result.records[s].correlator) {
                std::ostringstream corr;
                write_correlator_text(*result.records[s].correlator, corr);
                write_tracked(fs::path("correlators") / tag / slot_name(s), corr.str());
            }
        }
        double fraction = (double)result.effective_realizations / (double)result.realizations;
        bool quorum = fraction >= c.min_equilibrated_fraction;
        summary["status"] = quorum ? "complete" : "quorum-not-met";
        summary["N_d_effective"] = result.effective_realizations;
        summary["excluded"] = result.excluded;
        manifest_.set_summary(tag, summary);
        out_ << tag << ": " << result.effective_realizations << "/" << result.realizations
             << " realizations equilibrated\n";
        if (!quorum) {
            err_ << tag << ": equilibrated fraction " << num(fraction) << " is below the required "
                 << num(c.min_equilibrated_fraction) << "\n";
            return kExitQuorum;
        }
        return kExitOk;
    }

    fs::path run_dir_;
    RunManifest &manifest_;
    std::ostream &out_;
    std::ostream &err_;
};

void set_threads(int threads) {
    if (threads <= 0) {
        return;
    }
#ifdef _OPENMP
    omp_set_num_threads(threads);
#endif
}

// ---------------------------------------------------------------- commands

struct RunOptions {
    std::string config_path;
    std::string out_dir;
    bool force = false;
    bool serial = false;
    uint64_t sweep_budget = 0;
    bool corrupt = false;
};

void apply_hooks(RunConfig &rc, const RunOptions &o) {
    if (o.corrupt) {
        for (auto &c : rc.ensembles) {
            c.acceptance_rule = AcceptanceRule::kCorruptedForTesting;
        }
    }
}

int cmd_run(const RunOptions &o, std::ostream &out, std::ostream &err) {
    std::string text = read_file(o.config_path);
    RunConfig rc = parse_run_config(text);
    apply_hooks(rc, o);
    fs::path run_dir = o.out_dir.empty() ? default_output_root() / fs::path(o.config_path).stem() : fs::path(o.out_dir);
    if (fs::exists(run_dir / "manifest.json") && !o.force) {
        throw std::invalid_argument(
            "'" + run_dir.string() + "' already holds a run; use 'resume' to continue it or --force to overwrite.");
    }
    if (o.force) {
        for (const char *sub : {"checkpoints", "bundles", "tables", "histograms", "correlators", "diagnostics"}) {
            fs::remove_all(run_dir / sub);
        }
    }
    fs::create_directories(run_dir);
    RunManifest manifest(run_dir, "run");
    manifest.set_config(text);
    manifest.set_summary("tool_version", kToolVersion);
    atomic_write(run_dir / "config.ini", text);
    manifest.track("config.ini");
    manifest.write();
    out << "run directory: " << run_dir.string() << "\n";

    SignalScope signals;
    RunExecutor executor(run_dir, manifest, out, err);
    executor.sweep_budget = o.sweep_budget;
    executor.exec = o.serial ? Execution::kSerial : Execution::kParallel;
    return executor.execute(rc, true);
}

int cmd_resume(const std::string &run_dir_text, const RunOptions &o, std::ostream &out, std::ostream &err) {
    fs::path run_dir(run_dir_text);
    RunManifest manifest = RunManifest::load(run_dir);
    std::string text = read_file(o.config_path.empty() ? run_dir / "config.ini" : fs::path(o.config_path));
    RunConfig rc = parse_run_config(text);
    apply_hooks(rc, o);
    manifest.set_status("running");
    manifest.write();
    SignalScope signals;
    RunExecutor executor(run_dir, manifest, out, err);
    executor.sweep_budget = o.sweep_budget;
    executor.exec = o.serial ? Execution::kSerial : Execution::kParallel;
    return executor.execute(rc, false);
}

int cmd_analyze(const std::string &run_dir_text, const std::vector<double> &reweight, std::ostream &out, std::ostream &err) {
    fs::path run_dir(run_dir_text);
    RunConfig rc = parse_run_config(read_file(run_dir / "config.ini"));
    int code = kExitOk;
    for (const auto &c : rc.ensembles) {
        std::string tag = ensemble_tag(c);
        fs::path ckpt = run_dir / "checkpoints" / (tag + ".json");
        EnsembleProgress progress =
            checkpoint_from_json(c, parse_with_magic(read_file(ckpt), kCheckpointMagic, ckpt.string()));
        if (!progress.complete(c)) {
            err << tag << ": only " << progress.completed.size() << " of " << c.realizations
                << " realizations finished; resume the run first\n";
            code = kExitUsage;
            continue;
        }
        std::vector<RealizationBundle> bundles;
        for (const auto &[idx, b] : progress.completed) {
            bundles.push_back(b);
        }
        EnsembleResult result;
        try {
            result = aggregate(c, bundles);
        } catch (const std::runtime_error &e) {
            err << tag << ": " << e.what() << "\n";
            code = kExitQuorum;
            continue;
        }
        out << format_table(c, result);
        if (reweight.empty()) {
            continue;
        }
        out << "# reweighted: target_beta source_beta energy energy_err specific_heat specific_heat_err min_ess\n";
        for (double target : reweight) {
            size_t best = 0;
            for (size_t s = 0; s < result.records.size(); s++) {
                if (std::abs(result.records[s].beta - target) < std::abs(result.records[best].beta - target)) {
                    best = s;
                }
            }
            double source = result.records[best].beta;
            std::vector<double> e, cv;
            double min_ess = std::numeric_limits<double>::infinity();
            for (const auto &b : bundles) {
                if (!b.equilibration.equilibrated) {
                    continue;
                }
                ReweightResult rw = reweight_histogram(b.slots[best].histogram, source, target);
                min_ess = std::min(min_ess, rw.effective_sample_size);
                double m = rw.histogram.mean();
                double var = rw.histogram.mean_sq() - m * m;
                e.push_back(m);
                cv.push_back(target * target * var / (double)b.spin_count);
            }
            JackknifeEstimate je = jackknife_mean(e);
            JackknifeEstimate jc = jackknife_mean(cv);
            out << "reweighted\t" << num(target) << '\t' << num(source) << '\t' << num(je.value) << '\t'
                << num(je.error) << '\t' << num(jc.value) << '\t' << num(jc.error) << '\t' << num(min_ess) << '\n';
        }
    }
    return code;
}

int cmd_map(const std::string &code_name, int L, const std::string &sector, const std::string &out_path,
            const std::string &parity_path, std::ostream &out) {
    CodeKind kind = parse_code_kind(code_name);
    StabilizerCode code = kind == CodeKind::kCheckerboard ? build_checkerboard(L) : build_haah(L);
    CouplingHypergraph h = map_error_model(code, parse_pauli_type(sector));
    std::ostringstream text;
    write_hypergraph_text(h, text);
    atomic_write(out_path, text.str());
    if (!parity_path.empty()) {
        std::ostringstream parity;
        write_parity_text(code, parity);
        atomic_write(parity_path, parity.str());
    }
    out << code_kind_name(kind) << " L=" << L << " sector=" << sector << ": " << h.spin_count << " spins, "
        << h.coupling_count() << " couplings -> " << out_path << "\n";
    return kExitOk;
}

int cmd_gsd(const std::string &code_name, const std::vector<int> &sizes, const std::string &sector, std::ostream &out) {
    CodeKind kind = parse_code_kind(code_name);
    out << "code\tL\tsector\tspins\tcouplings\tgsd_exponent\tlogical_qubits\n";
    for (int L : sizes) {
        StabilizerCode code = kind == CodeKind::kCheckerboard ? build_checkerboard(L) : build_haah(L);
        CouplingHypergraph h = map_error_model(code, parse_pauli_type(sector));
        out << code_kind_name(kind) << '\t' << L << '\t' << sector << '\t' << h.spin_count << '\t'
            << h.coupling_count() << '\t' << classical_gsd_exponent(h) << '\t' << logical_qubit_count(code) << '\n';
    }
    return kExitOk;
}

std::vector<ThresholdEntry> read_threshold_table(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("Cannot read threshold table '" + path + "'.");
    }
    std::vector<ThresholdEntry> table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        std::istringstream ss(line);
        ThresholdEntry e;
        if (!(ss >> e.code)) {
            continue;
        }
        std::string rest;
        auto bad = [&](const std::string &why) {
            return std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + why);
        };
        if (!(ss >> e.p_x >> e.p_z)) {
            throw bad("expected 'name p_x p_z [quoted_sum [uncertainty]]'");
        }
        if (!(e.p_x >= 0 && e.p_x <= 1 && e.p_z >= 0 && e.p_z <= 1)) {
            throw bad("rates must lie in [0, 1]");
        }
        double q;
        if (ss >> q) {
            e.quoted_sum = q;
            double u;
            if (ss >> u) {
                e.quoted_uncertainty = u;
            }
        }
        if (ss >> rest) {
            throw bad("unexpected trailing field '" + rest + "'");
        }
        table.push_back(e);
    }
    return table;
}

int cmd_duality(const std::string &table_path, bool self_dual, const std::vector<double> &rates, bool records,
                std::ostream &out) {
    if (self_dual) {
        double p = self_dual_point();
        out << std::fixed << std::setprecision(10) << "self-dual point p* = " << p << "  H(p*) = " << binary_entropy(p)
            << "\n";
        out.unsetf(std::ios::floatfield);
    }
    for (double p : rates) {
        double h = binary_entropy(p);
        out << "p=" << num(p) << "\tH(p)=" << num(h) << "\tdual_threshold=";
        if (p > 0 && p < 0.5) {
            out << num(dual_threshold(p));
        } else {
            out << "undefined";
        }
        out << "\n";
    }
    if (self_dual || (!rates.empty() && table_path.empty())) {
        return kExitOk;
    }
    auto table = table_path.empty() ? known_thresholds() : read_threshold_table(table_path);
    auto checks = qgv_check(table);
    if (records) {
        for (const auto &c : checks) {
            json r{{"code", c.entry.code},
                   {"p_x", c.entry.p_x},
                   {"p_z", c.entry.p_z},
                   {"entropy_sum", c.entropy_sum},
                   {"quoted_sum", c.entry.quoted_sum ? json(*c.entry.quoted_sum) : json(nullptr)},
                   {"quoted_uncertainty", c.entry.quoted_uncertainty},
                   {"estimate", c.entry.estimate},
                   {"matches_quoted", c.matches_quoted},
                   {"exceeds_bound", c.exceeds_bound}};
            out << r.dump() << "\n";
        }
        return kExitOk;
    }
    out << std::left << std::setw(22) << "code" << std::setw(10) << "p_x" << std::setw(10) << "p_z" << std::setw(12)
        << "H_x+H_z" << std::setw(16) << "quoted" << "status\n";
    for (const auto &c : checks) {
        std::string quoted = c.entry.quoted_sum ? num(*c.entry.quoted_sum) + "+-" + num(c.entry.quoted_uncertainty) : "-";
        std::string status = c.exceeds_bound ? "EXCEEDS BOUND" : (c.matches_quoted ? "ok" : "MISMATCH");
        if (c.entry.estimate) {
            status += " (estimate)";
        }
        char sum[32];
        std::snprintf(sum, sizeof(sum), "%.6f", c.entropy_sum);
        out << std::setw(22) << c.entry.code << std::setw(10) << num(c.entry.p_x) << std::setw(10) << num(c.entry.p_z)
            << std::setw(12) << sum << std::setw(16) << quoted << status << "\n";
    }
    out << std::right;
    return kExitOk;
}

int cmd_oracle_check(const OracleSuiteOptions &o, std::ostream &out) {
    auto checks = run_oracle_suite(o);
    size_t failed = 0;
    for (const auto &c : checks) {
        failed += !c.passed;
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << num(c.value) << " (tolerance " << num(c.tolerance)
            << ")\n";
    }
    out << (failed ? "oracle-check FAILED: " : "oracle-check passed: ") << checks.size() - failed << "/"
        << checks.size() << " comparisons within tolerance\n";
    return failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

std::atomic<bool> &stop_requested() {
    static std::atomic<bool> flag{false};
    return flag;
}

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Fracton code thresholds via disordered Ising models and parallel tempering."};
    app.name("fractonlab");
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: hardware parallelism)")->check(CLI::PositiveNumber);

    // map
    auto *map = app.add_subcommand("map", "Write the coupling hypergraph of a code sector");
    std::string map_code, map_sector = "X", map_out, map_parity;
    int map_L = 0;
    map->add_option("--code", map_code, "checkerboard or haah")->required();
    map->add_option("-L,--L", map_L, "Lattice size")->required();
    map->add_option("--sector", map_sector, "Error type X or Z");
    map->add_option("-o,--out", map_out, "Hypergraph output file")->required();
    map->add_option("--parity", map_parity, "Also write the parity-check matrices here");

    // run / resume
    RunOptions run_opts;
    auto *run = app.add_subcommand("run", "Run the disorder ensembles of a config file");
    run->add_option("config", run_opts.config_path, "Run config (INI)")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--out", run_opts.out_dir, std::string("Run directory (default: $") + kOutputRootEnv + "/<config name>)");
    run->add_flag("--force", run_opts.force, "Overwrite an existing run directory");
    run->add_flag("--serial", run_opts.serial, "Use the serial reference path");
    run->add_option("--test-sweep-budget", run_opts.sweep_budget)->group("");
    run->add_flag("--test-corrupt-acceptance", run_opts.corrupt)->group("");

    std::string resume_dir;
    RunOptions resume_opts;
    auto *resume = app.add_subcommand("resume", "Continue an interrupted run from its checkpoints");
    resume->add_option("run_dir", resume_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
    resume->add_option("--config", resume_opts.config_path, "Config to check against the checkpoints (default: the run's own)");
    resume->add_flag("--serial", resume_opts.serial, "Use the serial reference path");
    resume->add_option("--test-sweep-budget", resume_opts.sweep_budget)->group("");

    // analyze
    std::string analyze_dir;
    std::vector<double> reweight;
    auto *analyze = app.add_subcommand("analyze", "Re-aggregate a finished run; optionally reweight to other betas");
    analyze->add_option("run_dir", analyze_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
    analyze->add_option("--reweight", reweight, "Target inverse temperatures for histogram reweighting");

    // duality
    std::string table_path;
    bool self_dual = false, records = false;
    std::vector<double> rates;
    auto *duality = app.add_subcommand("duality", "Entropy sums, dual thresholds and the self-dual point");
    duality->add_option("--table", table_path, "Threshold table: lines 'name p_x p_z [quoted_sum [uncertainty]]'");
    duality->add_flag("--self-dual", self_dual, "Print the self-dual point H(p*) = 1/2");
    duality->add_option("--rate", rates, "Print H(p) and the dual threshold of these rates");
    duality->add_flag("--records", records, "Emit one JSON record per table row");

    // gsd
    std::string gsd_code, gsd_sector = "X";
    std::vector<int> gsd_sizes;
    auto *gsd = app.add_subcommand("gsd", "Classical ground-state degeneracy exponents and logical qubit counts");
    gsd->add_option("--code", gsd_code, "checkerboard or haah")->required();
    gsd->add_option("-L,--L", gsd_sizes, "Lattice sizes")->required();
    gsd->add_option("--sector", gsd_sector, "Error type X or Z");

    // oracle-check
    OracleSuiteOptions oracle;
    bool oracle_corrupt = false;
    auto *oc = app.add_subcommand("oracle-check", "Compare the samplers with exact enumeration");
    oc->add_option("--spins", oracle.spins, "Spin count (<= 24)");
    oc->add_option("--couplings", oracle.couplings, "Coupling count");
    oc->add_option("--body", oracle.body, "Spins per coupling");
    oc->add_option("--p", oracle.p, "Disorder rate");
    oc->add_option("--seed", oracle.seed, "Seed");
    oc->add_option("--sweeps", oracle.sweeps, "Recorded sweeps per chain");
    oc->add_flag("--test-corrupt-acceptance", oracle_corrupt)->group("");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    set_threads(threads);

    try {
        if (*map) {
            return cmd_map(map_code, map_L, map_sector, map_out, map_parity, out);
        }
        if (*run) {
            return cmd_run(run_opts, out, err);
        }
        if (*resume) {
            return cmd_resume(resume_dir, resume_opts, out, err);
        }
        if (*analyze) {
            return cmd_analyze(analyze_dir, reweight, out, err);
        }
        if (*duality) {
            for (double p : rates) {
                if (!(p >= 0 && p <= 1)) {
                    throw std::invalid_argument("Rate " + num(p) + " is outside [0, 1].");
                }
            }
            return cmd_duality(table_path, self_dual, rates, records, out);
        }
        if (*gsd) {
            return cmd_gsd(gsd_code, gsd_sizes, gsd_sector, out);
        }
        if (*oc) {
            if (oracle_corrupt) {
                oracle.rule = AcceptanceRule::kCorruptedForTesting;
            }
            return cmd_oracle_check(oracle, out);
        }
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception &e) {
        err << "error: malformed run file: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error &e) {
        err << "internal invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}

}  // namespace fractonlab

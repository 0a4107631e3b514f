// Copyright 2026 The qgc Authors
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

// Command-line harness. Exit codes: 0 pass, 1 usage or parse error,
// 2 budget exceeded, 3 integrity failure (tampered bundle, failed check).

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qgc/qgc.hpp"
#include "qgc/verify.hpp"
#include "qgc/zk.hpp"

using namespace qgc;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitIntegrity = 3;

struct RunConfig {
    uint64_t seed = 1;
    std::string backend = "compressed";
    int segment_bits = -2;  // -2: backend default
    int prg_bits = 0;       // nonzero selects the seeded-segment mode
    double budget_mb = 64;
    int samples = 2000;
    double tol_stat = Tolerances::kStat;
    std::string out;

    Backend backend_kind() const { return parse_backend(backend); }

    CreParams cre() const {
        if (prg_bits > 0) return CreParams::prg(prg_bits);
        if (segment_bits >= -1) return CreParams::with_segments(segment_bits);
        // Explicit simulation needs one-bit labels; the compressed path
        // defaults to short seeds so that deep circuits stay small.
        return backend_kind() == Backend::kExplicit ? CreParams::with_segments(0) : CreParams::prg(8);
    }

    uint64_t budget_bits() const {
        double b = budget_mb * 1024 * 1024 * 8;
        return b >= 1.8e19 ? UINT64_MAX : uint64_t(b);
    }

    std::string digest() const {
        std::string s = fmt::format("{}|{}|{}|{}|{}|{:g}", backend, cre().describe(), budget_bits(), samples, seed,
                                    tol_stat);
        return fmt::format("{:016x}", splitmix64(std::hash<std::string>{}(s)));
    }

    std::string header() const {
        return fmt::format("version={} seed={} backend={} cre=\"{}\" budget_bits={} config={}\n", kVersion, seed,
                           backend, cre().describe(), budget_bits(), digest());
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw ParseError("cannot write " + cfg.out);
    f << text;
}

QuantumState random_input(const Topology& t, Rng& rng) {
    RegisterMap regs;
    for (int i = 0; i < t.n; i++) {
        if (!t.is_zero(i)) regs.add("in" + std::to_string(i), 1);
    }
    std::vector<cd> a(size_t{1} << regs.total());
    double n = 0;
    for (auto& x : a) {
        x = cd(rng.normal(), rng.normal());
        n += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(n);
    return QuantumState::from_amplitudes(regs, a);
}

int cmd_plan(const RunConfig& cfg, const std::string& circuit_path) {
    Circuit c = load_circuit_file(circuit_path);
    LabelPlan plan = plan_labels(c.topo, cfg.cre(), cfg.budget_bits());
    std::cout << cfg.header() << plan.report() << plan.summary() << "\n";
    return 0;
}

int cmd_garble(const RunConfig& cfg, const std::string& circuit_path, const std::string& input_path) {
    Circuit c = load_circuit_file(circuit_path);
    Rng rng(cfg.seed);
    EncodeOptions opt;
    opt.backend = cfg.backend_kind();
    opt.cre = cfg.cre();
    opt.budget_bits = cfg.budget_bits();
    LabelPlan plan = plan_labels(c.topo, opt.cre, opt.budget_bits);
    QuantumState x = input_path.empty() ? random_input(c.topo, rng) : parse_state(read_file(input_path));
    RandomnessJ J = sample_randomness(c.topo, plan, rng);
    EncodingBundle b = enc(c, x, J, opt);
    emit(cfg, write_bundle(b));
    uint64_t offline_bytes = 0;
    for (const Bits& o : b.offline) offline_bytes += (o.size() + 7) / 8;
    std::cerr << cfg.header() << plan.report() << fmt::format("offline_bytes={}\n", offline_bytes);
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& bundle_path) {
    EncodingBundle b = read_bundle(read_file(bundle_path));
    Rng rng(cfg.seed);
    DecodeResult r = dec(std::move(b), rng);
    std::ostringstream os;
    os << cfg.header();
    for (const auto& [w, labels] : r.label_log) {
        os << fmt::format("label wire={} z={} x={}\n", w, labels.first.to_string(), labels.second.to_string());
    }
    if (r.invalid_slots > 0) {
        os << fmt::format("warning=garbage-state invalid_slots={}\n", r.invalid_slots);
    }
    os << dump_state(r.state);
    emit(cfg, os.str());
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
    verify::Config vc;
    vc.seed = cfg.seed;
    vc.samples = cfg.samples;
    vc.tol_stat = cfg.tol_stat;
    std::vector<verify::SuiteReport> reports = verify::run(suite, vc);
    emit(cfg, cfg.header() + verify::format_report(reports, vc));
    for (const auto& r : reports) {
        if (!r.pass()) return kExitIntegrity;
    }
    return 0;
}

int cmd_zk(const RunConfig& cfg, const std::string& instance, const std::string& adversary, int runs, bool simulate) {
    if (runs < 1) throw ParseError("--runs must be at least 1");
    zk::QmaInstance inst = zk::instance_by_name(instance);
    zk::Adversary adv = zk::parse_adversary(adversary);
    zk::ZkConfig zc;
    zc.budget_bits = cfg.budget_bits();
    if (cfg.prg_bits > 0) zc.cre = CreParams::prg(cfg.prg_bits);
    Rng rng(cfg.seed);
    const Bits x = Bits::from_string("0");
    std::ostringstream os;
    os << cfg.header() << fmt::format("instance={} adversary={} runs={}\n", inst.name, adversary, runs);
    int count[2] = {0, 0}, acc[2] = {0, 0};
    std::string last;
    for (int k = 0; k < runs; k++) {
        zk::Transcript t = zk::run_protocol(inst, zc, adv, x, zk::plus_witness(), rng);
        count[t.b]++;
        acc[t.b] += t.verdict.accept;
        if (k + 1 == runs) last = zk::transcript_json(t);
    }
    for (int b = 0; b < 2; b++) {
        double rate = count[b] ? double(acc[b]) / count[b] : 0.0;
        os << fmt::format("challenge={} runs={} accepts={} rate={:.4f}\n", b, count[b], acc[b], rate);
    }
    os << fmt::format("overall accepts={} rate={:.4f}\n", acc[0] + acc[1], double(acc[0] + acc[1]) / runs);
    if (simulate) {
        Rng coin(split_seed(cfg.seed, "zk-verifier", 0));
        zk::ChallengeOracle honest = [&coin](const zk::Message1&) { return zk::verifier_challenge(coin); };
        int aborts = 0;
        for (int k = 0; k < runs; k++) aborts += zk::zksim0(inst, zc, honest, x, rng).abort;
        os << fmt::format("simulate runs={} aborts={} rate={:.4f}\n", runs, aborts, double(aborts) / runs);
    }
    std::cout << os.str();
    if (!cfg.out.empty()) emit(cfg, last + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum garbled circuits: garble, evaluate, verify and demo"};
    app.require_subcommand(1);
    RunConfig cfg;
    if (const char* env = std::getenv("QGC_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: QGC_SEED is not an integer\n";
            return kExitUsage;
        }
    }
    app.add_option("--seed", cfg.seed, "Master seed (falls back to QGC_SEED)");
    app.add_option("--backend", cfg.backend, "explicit or compressed")->check(CLI::IsMember({"explicit", "compressed"}));
    app.add_option("--segment-bits", cfg.segment_bits, "Key bits per masked segment (-1: whole output)");
    app.add_option("--prg-bits", cfg.prg_bits, "Seed bits per segment; selects the seeded mode");
    app.add_option("--budget-mb", cfg.budget_mb, "Classical size budget in MiB");
    app.add_option("--samples", cfg.samples, "Monte-Carlo samples for statistical checks");
    app.add_option("--tolerance-stat", cfg.tol_stat, "Statistical tolerance");
    app.add_option("--out", cfg.out, "Output file (default stdout)");

    std::string circuit, input, bundle, suite = "all", instance = "plus-witness", adversary = "honest";
    int runs = 100;
    bool random_input_flag = false, simulate = false;

    auto* plan = app.add_subcommand("plan", "Print the label plan of a circuit");
    plan->add_option("circuit", circuit, "Circuit file")->required();

    auto* garble = app.add_subcommand("garble", "Encode a circuit and input into a bundle file");
    garble->add_option("circuit", circuit, "Circuit file")->required();
    auto* in_opt = garble->add_option("--input", input, "State file for the inputs");
    garble->add_flag("--random-input", random_input_flag, "Draw a random pure input")->excludes(in_opt);

    auto* eval = app.add_subcommand("eval", "Decode a bundle file");
    eval->add_option("bundle", bundle, "Bundle file")->required();

    auto* ver = app.add_subcommand("verify", "Run a property suite");
    std::vector<std::string> suites = verify::suite_names();
    suites.push_back("all");
    ver->add_option("suite", suite, "Suite name")->check(CLI::IsMember(suites));

    auto* zkd = app.add_subcommand("zk-demo", "Run the zero-knowledge protocol");
    zkd->add_option("--instance", instance)->check(CLI::IsMember({"plus-witness", "always-reject"}));
    zkd->add_option("--adversary", adversary)
        ->check(CLI::IsMember({"honest", "wrong-gate", "label-swap", "output-flip", "equivocate"}));
    zkd->add_option("--runs", runs)->check(CLI::PositiveNumber);
    zkd->add_flag("--simulate", simulate, "Also report the simulator's abort rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*plan) return cmd_plan(cfg, circuit);
        if (*garble) return cmd_garble(cfg, circuit, input);
        if (*eval) return cmd_eval(cfg, bundle);
        if (*ver) return cmd_verify(cfg, suite);
        if (*zkd) return cmd_zk(cfg, instance, adversary, runs, simulate);
    } catch (const BudgetError& e) {
        std::cerr << "error=budget " << e.what() << "\n";
        return kExitBudget;
    } catch (const IntegrityError& e) {
        std::cerr << "error=integrity " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const ParseError& e) {
        std::cerr << "error=parse " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error=usage " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

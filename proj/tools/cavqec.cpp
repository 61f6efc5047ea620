// Copyright 2026 The cavqec Authors
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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cavqec/circuit.hpp"
#include "cavqec/codes.hpp"
#include "cavqec/decoder.hpp"
#include "cavqec/harness.hpp"
#include "cavqec/io.hpp"
#include "cavqec/schedule.hpp"
#include "cavqec/sim.hpp"
#include "cavqec/steane.hpp"

using namespace cavqec;

namespace {

struct Globals {
    uint64_t seed = 0;
    size_t threads = 1;
    std::string out;
};

// Writes to --out when given, stdout otherwise.
void emit(const Globals &g, const std::string &text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') {
            std::cout << '\n';
        }
    } else {
        write_file(g.out, text);
    }
}

CheckPolynomial parse_polynomial(const std::string &s) {
    CheckPolynomial h;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        h.exponents.push_back((uint32_t)std::stoul(tok));
    }
    return h;
}

Circuit memory_circuit(const CssCode &code, size_t rounds, ModelKind model, double p, double m) {
    return build_memory_experiment(code, rounds, make_noise_model(model, p, m), diagonal_schedule(code, layout(code)));
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"cavqec: hypergraph-product memory experiments with cavity-assisted syndrome extraction"};
    app.require_subcommand(1);
    Globals g;
    g.threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--seed", g.seed, "Seed for all randomness");
    app.add_option("--threads", g.threads, "Worker threads");
    app.add_option("--out", g.out, "Output file (stdout when omitted)");

    // build-code
    auto *build = app.add_subcommand("build-code", "Hypergraph product of a circulant check polynomial with itself");
    std::string poly = "0,1,2";
    size_t lift = 6;
    std::string boundary = "periodic";
    size_t w_max = 0;
    build->add_option("--polynomial", poly, "Exponents of h(x), e.g. 0,1,2 for 1+x+x^2");
    build->add_option("--lift", lift, "Circulant size");
    build->add_option("--boundary", boundary, "periodic or open")->check(CLI::IsMember({"periodic", "open"}));
    build->add_option("--distance-wmax", w_max, "Exhaustive distance search up to this weight (0 = skip)");
    build->callback([&] {
        CssCode code = code_from_polynomial(parse_polynomial(poly), lift, boundary_from_string(boundary));
        auto params = code_parameters(code);
        std::cerr << "[[" << params.n << "," << params.k;
        if (w_max) {
            auto d = compute_distance(code, w_max);
            std::cerr << "," << (d.exact ? "" : ">=") << d.value;
        }
        std::cerr << "]]\n";
        emit(g, code_to_json(code));
    });

    // gen-circuit
    auto *gen = app.add_subcommand("gen-circuit", "Memory experiment circuit for a code");
    std::string code_path, model = "agnostic";
    size_t rounds = 1;
    double p = 1e-3, m = 1;
    gen->add_option("--code", code_path, "code.json")->required();
    gen->add_option("--rounds", rounds, "Syndrome extraction rounds");
    gen->add_option("--model", model)->check(CLI::IsMember({"agnostic", "custom"}));
    gen->add_option("--p", p, "Physical error rate");
    gen->add_option("--m", m, "Cavity error ratio p_cavity / p");
    gen->callback([&] {
        CssCode code = code_from_json(read_file(code_path));
        emit(g, memory_circuit(code, rounds, model_from_string(model), p, m).str());
    });

    // schedule
    auto *sched = app.add_subcommand("schedule", "Diagonal cavity schedule for a code");
    sched->add_option("--code", code_path, "code.json")->required();
    sched->callback([&] {
        CssCode code = code_from_json(read_file(code_path));
        Layout lay = layout(code);
        Schedule s = diagonal_schedule(code, lay);
        auto rep = validate_schedule(s, assign_cavities(lay));
        std::cerr << s.timesteps.size() << " timesteps, " << (rep.ok ? "valid" : "INVALID: " + rep.message) << "\n";
        emit(g, schedule_to_json(s, lay));
    });

    // sample
    auto *sample = app.add_subcommand("sample", "Sample detector and observable flips");
    std::string circuit_path, format = "b8";
    size_t shots = 1000;
    sample->add_option("--circuit", circuit_path)->required();
    sample->add_option("--shots", shots);
    sample->add_option("--format", format)->check(CLI::IsMember({"b8", "csv"}));
    sample->callback([&] {
        Circuit c = Circuit::parse(read_file(circuit_path));
        SampleBatch b = sample_frames(c, shots, g.seed, g.threads);
        std::ostringstream os;
        if (format == "b8") {
            write_b8(os, b);
        } else {
            write_csv(os, b);
        }
        emit(g, os.str());
    });

    // decode
    auto *decode = app.add_subcommand("decode", "Decode b8 samples against a circuit's error model");
    std::string samples_path;
    decode->add_option("--circuit", circuit_path)->required();
    decode->add_option("--samples", samples_path, "b8 file from `sample`")->required();
    decode->add_option("--shots", shots)->required();
    decode->callback([&] {
        Circuit c = Circuit::parse(read_file(circuit_path));
        std::istringstream in(read_file(samples_path));
        SampleBatch b = read_b8(in, shots, c.detector_count, c.observable_count);
        Decoder dec(build_dem(c));
        std::ostringstream os;
        size_t failures = 0;
        for (size_t s = 0; s < shots; s++) {
            auto pred = dec.predict(b.detector_row(s));
            bool fail = false;
            for (size_t k = 0; k < c.observable_count; k++) {
                bool bit = (pred[k >> 6] >> (k & 63)) & 1;
                os << (bit ? '1' : '0');
                fail |= bit != b.observable(s, k);
            }
            os << '\n';
            failures += fail;
        }
        std::cerr << failures << " / " << shots << " shots mispredicted\n";
        emit(g, os.str());
    });

    // run-point
    auto *point = app.add_subcommand("run-point", "Sample and decode one (code, p) point; prints a CSV row");
    size_t d = 0;
    point->add_option("--code", code_path)->required();
    point->add_option("--d", d, "Code distance (rounds default to d)")->required();
    point->add_option("--p", p);
    point->add_option("--m", m);
    point->add_option("--model", model)->check(CLI::IsMember({"agnostic", "custom"}));
    point->add_option("--shots", shots);
    point->add_option("--rounds", rounds, "Override the number of rounds");
    std::string code_id = "code";
    point->add_option("--id", code_id, "Code label in the CSV");
    point->callback([&] {
        CssCode code = code_from_json(read_file(code_path));
        RunOptions opt;
        opt.shots = shots;
        opt.seed = g.seed;
        opt.threads = g.threads;
        opt.rounds = point->count("--rounds") ? rounds : 0;
        DataPoint pt = run_point(code, code_id, d, p, m, model_from_string(model), opt);
        emit(g, points_csv_header() + "\n" + to_csv_row(pt) + "\n");
    });

    // threshold
    auto *thr = app.add_subcommand("threshold", "Fit the threshold law to point data or a manifest");
    std::string points_path, manifest_path, points_out;
    double fix_a = 0, fix_b = 0;
    thr->add_option("--points", points_path, "CSV from run-point");
    thr->add_option("--manifest", manifest_path, "Experiment manifest JSON; runs every point first");
    thr->add_option("--points-out", points_out, "Where to save points produced from a manifest");
    thr->add_option("--fix-a", fix_a);
    thr->add_option("--fix-b", fix_b);
    thr->callback([&] {
        std::vector<DataPoint> pts;
        if (!manifest_path.empty()) {
            Manifest mf = manifest_from_json(read_file(manifest_path));
            std::string csv = points_csv_header() + "\n";
            for (size_t ci = 0; ci < mf.codes.size(); ci++) {
                const auto &mc = mf.codes[ci];
                CssCode code = code_from_polynomial(mc.polynomial, mc.lift, mc.boundary);
                for (size_t pi = 0; pi < mf.p.size(); pi++) {
                    RunOptions opt;
                    opt.shots = mf.shots;
                    opt.rounds = mf.rounds;
                    opt.threads = g.threads;
                    opt.seed = g.seed + 1000003 * ci + pi;
                    pts.push_back(run_point(code, mc.id, mc.d, mf.p[pi], mf.m, mf.model, opt));
                    csv += to_csv_row(pts.back()) + "\n";
                    std::cerr << to_csv_row(pts.back()) << "\n";
                }
            }
            if (!points_out.empty()) {
                write_file(points_out, csv);
            }
        } else if (!points_path.empty()) {
            pts = points_from_csv(read_file(points_path));
        } else {
            throw CLI::ValidationError("threshold needs --points or --manifest");
        }
        std::vector<DataPoint> usable;
        for (const auto &pt : pts) {
            if (pt.failures > 0) {
                usable.push_back(pt);
            }
        }
        std::optional<std::pair<double, double>> fixed;
        if (fix_a > 0 && fix_b > 0) {
            fixed = std::make_pair(fix_a, fix_b);
        }
        FitResult fit = fit_threshold(usable, fixed);
        std::map<std::string, std::vector<DataPoint>> by_code;
        for (const auto &pt : pts) {
            by_code[pt.code_id].push_back(pt);
        }
        std::vector<double> crossings;
        for (auto a = by_code.begin(); a != by_code.end(); ++a) {
            for (auto b = std::next(a); b != by_code.end(); ++b) {
                for (double x : curve_crossings(a->second, b->second)) {
                    crossings.push_back(x);
                }
            }
        }
        emit(g, fit_to_json(fit, crossings));
    });

    // cooperativity
    auto *coop = app.add_subcommand("cooperativity", "Cooperativity needed for p_cavity = m p_th");
    size_t n_qubits = 6;
    double p_th = 8.12e-3;
    coop->add_option("--n", n_qubits, "Qubits per nonlocal gate (max stabilizer weight)");
    coop->add_option("--m", m);
    coop->add_option("--p-th", p_th);
    coop->callback([&] {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g\n", cooperativity(n_qubits, m, p_th));
        emit(g, buf);
    });

    // steane-verify
    auto *steane = app.add_subcommand("steane-verify", "Dense checks of the cat-state encoder on the Steane code");
    std::string which = "all";
    double coop_value = 1e6;
    steane->add_option("--case", which)->check(
        CLI::IsMember({"all", "perfect_perfect", "faulty_encode", "faulty_decode", "heisenberg", "ghz_merge", "cavity_map"}));
    steane->add_option("--cooperativity", coop_value);
    steane->callback([&] {
        std::vector<VerifierReport> reports;
        auto want = [&](const std::string &name) { return which == "all" || which == name; };
        if (want("cavity_map")) {
            reports.push_back(cavity_map_check(coop_value));
        }
        if (want("heisenberg")) {
            reports.push_back(heisenberg_check());
        }
        if (want("ghz_merge")) {
            reports.push_back(ghz_merge_check());
        }
        for (auto c : {SteaneCase::perfect_perfect, SteaneCase::faulty_encode, SteaneCase::faulty_decode}) {
            if (want(to_string(c))) {
                reports.push_back(run_case(c, coop_value, g.seed ? g.seed : 1));
            }
        }
        bool ok = true;
        for (const auto &r : reports) {
            std::cerr << (r.passed() ? "PASS " : "FAIL ") << r.name << "\n";
            ok &= r.passed();
        }
        emit(g, reports_to_json(reports));
        if (!ok) {
            throw CLI::RuntimeError(1);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

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

#include "cavqec/harness.hpp"

#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cavqec/schedule.hpp"
#include "cavqec/sim.hpp"

namespace cavqec {

void DataPoint::validate() const {
    if (failures > shots) {
        throw std::invalid_argument("data point has more failures than shots");
    }
    if (!(per_round_rate >= 0 && per_round_rate <= 1)) {
        throw std::invalid_argument("per-round rate outside [0, 1]");
    }
}

double per_round(double p_total, size_t d) {
    if (!(p_total >= 0 && p_total <= 1) || d == 0) {
        throw std::invalid_argument("per_round needs P in [0, 1] and d >= 1");
    }
    if (p_total == 1) {
        return 1;
    }
    return -std::expm1(std::log1p(-p_total) / (double)d);
}

double total_from_per_round(double p_round, size_t d) {
    if (!(p_round >= 0 && p_round <= 1) || d == 0) {
        throw std::invalid_argument("total_from_per_round needs p in [0, 1] and d >= 1");
    }
    if (p_round == 1) {
        return 1;
    }
    return -std::expm1((double)d * std::log1p(-p_round));
}

std::pair<double, double> wilson_interval(size_t failures, size_t shots, double z) {
    if (shots == 0 || failures > shots) {
        throw std::invalid_argument("wilson_interval needs 0 <= failures <= shots, shots > 0");
    }
    double n = (double)shots;
    double ph = (double)failures / n;
    double z2 = z * z;
    double center = (ph + z2 / (2 * n)) / (1 + z2 / n);
    double half = z / (1 + z2 / n) * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct RowKey {
    const uint64_t *row;
    size_t words;
    bool operator<(const RowKey &o) const { return std::lexicographical_compare(row, row + words, o.row, o.row + words); }
};

}  // namespace

DataPoint run_point(const CssCode &code, const std::string &code_id, size_t d, double p, double m, ModelKind model,
                    const RunOptions &opt) {
    if (d == 0 || opt.shots == 0) {
        throw std::invalid_argument("run_point needs d >= 1 and shots >= 1");
    }
    DataPoint pt;
    pt.code_id = code_id;
    pt.d = d;
    pt.p = p;
    pt.m = m;
    pt.model = model;
    pt.shots = opt.shots;
    pt.rounds = opt.rounds ? opt.rounds : d;

    NoiseModel noise = make_noise_model(model, p, m);
    Layout lay = layout(code);
    Schedule sched = diagonal_schedule(code, lay);
    Circuit circuit = build_memory_experiment(code, pt.rounds, noise, sched, opt.memory);
    SampleBatch batch = sample_frames(circuit, opt.shots, opt.seed, opt.threads);

    // Low-noise batches repeat syndromes a lot; decode each distinct one once.
    std::map<RowKey, size_t> unique;
    std::vector<size_t> shot_class(opt.shots);
    std::vector<size_t> representative;
    for (size_t s = 0; s < opt.shots; s++) {
        auto [it, fresh] = unique.emplace(RowKey{batch.detector_row(s), batch.det_words}, representative.size());
        if (fresh) {
            representative.push_back(s);
        }
        shot_class[s] = it->second;
    }

    std::vector<std::vector<uint64_t>> prediction(representative.size());
    bool any_noise = !circuit.instructions.empty() && p > 0;
    if (any_noise) {
        Decoder decoder(build_dem(circuit), opt.decoder);
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next++; i < representative.size(); i = next++) {
                prediction[i] = decoder.predict(batch.detector_row(representative[i]));
            }
        };
        size_t threads = std::max<size_t>(1, std::min(opt.threads, representative.size()));
        std::vector<std::thread> pool;
        for (size_t t = 1; t < threads; t++) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto &th : pool) {
            th.join();
        }
    } else {
        for (auto &pred : prediction) {
            pred.assign(batch.obs_words, 0);
        }
    }

    for (size_t s = 0; s < opt.shots; s++) {
        const auto &pred = prediction[shot_class[s]];
        const uint64_t *actual = batch.observable_row(s);
        bool fail = false;
        for (size_t w = 0; w < batch.obs_words; w++) {
            fail |= (pred[w] ^ actual[w]) != 0;
        }
        pt.failures += fail;
    }

    double total = (double)pt.failures / (double)pt.shots;
    pt.per_round_rate = per_round(total, pt.rounds);
    double se_total = std::sqrt(total * (1 - total) / (double)pt.shots);
    // Delta method through P -> 1 - (1 - P)^(1/d).
    double slope = total < 1 ? std::pow(1 - total, 1.0 / (double)pt.rounds - 1) / (double)pt.rounds : 0;
    pt.std_error = se_total * slope;
    return pt;
}

double cooperativity(size_t n, double m, double p_th) {
    if (n == 0 || !(m > 0) || !(p_th > 0)) {
        throw std::invalid_argument("cooperativity needs positive N, m and p_th");
    }
    double dn = std::sqrt(2 * (1 + std::ldexp(1.0, -(int)n)));
    double root = (double)n * std::numbers::pi / (m * p_th * dn);
    return root * root;
}

namespace {

struct FitData {
    std::vector<double> log_p, log_rate, d, weight;
    bool fixed = false;
    double fixed_a = 0, fixed_b = 0;
};

// Parameters live in log space so positivity never has to be enforced.
void unpack(const FitData &fd, const double *x, double &logA, double &a, double &b, double &logpth) {
    logA = x[0];
    logpth = x[1];
    if (fd.fixed) {
        a = fd.fixed_a;
        b = fd.fixed_b;
    } else {
        a = std::exp(x[2]);
        b = std::exp(x[3]);
    }
}

double objective(const FitData &fd, const double *x) {
    double logA, a, b, logpth;
    unpack(fd, x, logA, a, b, logpth);
    double sum = 0;
    for (size_t i = 0; i < fd.log_p.size(); i++) {
        double model = logA + a * std::pow(fd.d[i], b) * (fd.log_p[i] - logpth);
        double r = fd.log_rate[i] - model;
        sum += fd.weight[i] * r * r;
    }
    return std::isfinite(sum) ? sum : std::numeric_limits<double>::max();
}

double gsl_objective(const gsl_vector *v, void *params) {
    return objective(*static_cast<const FitData *>(params), v->data);
}

std::vector<double> minimize(const FitData &fd, std::vector<double> start, double &best) {
    size_t dim = start.size();
    gsl_multimin_function f{&gsl_objective, dim, const_cast<FitData *>(&fd)};
    gsl_vector *x = gsl_vector_alloc(dim);
    gsl_vector *step = gsl_vector_alloc(dim);
    gsl_multimin_fminimizer *s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
    // Restarting from the last minimum shakes the simplex out of premature collapse.
    for (int restart = 0; restart < 4; restart++) {
        for (size_t i = 0; i < dim; i++) {
            gsl_vector_set(x, i, start[i]);
            gsl_vector_set(step, i, 0.3);
        }
        gsl_multimin_fminimizer_set(s, &f, x, step);
        for (int it = 0; it < 20000; it++) {
            if (gsl_multimin_fminimizer_iterate(s)) {
                break;
            }
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) {
                break;
            }
        }
        for (size_t i = 0; i < dim; i++) {
            start[i] = gsl_vector_get(s->x, i);
        }
    }
    best = s->fval;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return start;
}

}  // namespace

FitResult fit_threshold(const std::vector<DataPoint> &points, std::optional<std::pair<double, double>> fix_a_b) {
    std::map<std::string, size_t> per_code;
    for (const auto &pt : points) {
        pt.validate();
        if (pt.failures == 0 || !(pt.per_round_rate > 0) || !(pt.p > 0)) {
            throw std::invalid_argument("fit_threshold: point with zero failures or zero rate (log undefined)");
        }
        per_code[pt.code_id]++;
    }
    if (per_code.size() < 2) {
        throw std::invalid_argument("fit_threshold needs at least two codes");
    }
    for (const auto &[id, count] : per_code) {
        if (count < 3) {
            throw std::invalid_argument("fit_threshold needs at least three points for code " + id);
        }
    }

    // Sort a copy so the result cannot depend on the caller's ordering.
    std::vector<DataPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const DataPoint &x, const DataPoint &y) {
        return std::tie(x.code_id, x.d, x.p, x.per_round_rate) < std::tie(y.code_id, y.d, y.p, y.per_round_rate);
    });

    FitData fd;
    bool unit = std::any_of(sorted.begin(), sorted.end(), [](const DataPoint &pt) { return !(pt.std_error > 0); });
    for (const auto &pt : sorted) {
        fd.log_p.push_back(std::log(pt.p));
        fd.log_rate.push_back(std::log(pt.per_round_rate));
        fd.d.push_back((double)pt.d);
        double rel = pt.std_error / pt.per_round_rate;
        fd.weight.push_back(unit ? 1.0 : 1.0 / (rel * rel));
    }
    if (fix_a_b) {
        if (!(fix_a_b->first > 0) || !(fix_a_b->second > 0)) {
            throw std::invalid_argument("fixed a and b must be positive");
        }
        fd.fixed = true;
        fd.fixed_a = fix_a_b->first;
        fd.fixed_b = fix_a_b->second;
    }

    double lp_min = *std::min_element(fd.log_p.begin(), fd.log_p.end());
    double lp_max = *std::max_element(fd.log_p.begin(), fd.log_p.end());
    double lr_max = *std::max_element(fd.log_rate.begin(), fd.log_rate.end());

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    for (double t : {-0.5, 0.0, 0.5, 1.0, 1.5}) {
        double logpth = lp_max + t * (lp_max - lp_min + 0.1);
        for (double a0 : {0.5, 1.0}) {
            for (double b0 : {0.5, 1.0, 1.5}) {
                std::vector<double> x0{lr_max, logpth};
                if (!fd.fixed) {
                    x0.push_back(std::log(a0));
                    x0.push_back(std::log(b0));
                } else if (a0 != 0.5 || b0 != 0.5) {
                    continue;
                }
                double val;
                auto x = minimize(fd, x0, val);
                if (val < best) {
                    best = val;
                    best_x = x;
                }
            }
        }
    }

    FitResult r;
    r.fixed_a_b = fd.fixed;
    double logA, a, b, logpth;
    unpack(fd, best_x.data(), logA, a, b, logpth);
    r.A = std::exp(logA);
    r.a = a;
    r.b = b;
    r.p_th = std::exp(logpth);
    r.residual = best;

    // Standard errors from the linearized weighted problem in the natural parameters.
    size_t npar = fd.fixed ? 2 : 4;
    size_t n = fd.log_p.size();
    Eigen::MatrixXd J(n, npar);
    Eigen::VectorXd w(n);
    for (size_t i = 0; i < n; i++) {
        double db = std::pow(fd.d[i], b);
        double diff = fd.log_p[i] - logpth;
        J(i, 0) = 1.0 / r.A;
        J(i, 1) = -a * db / r.p_th;
        if (!fd.fixed) {
            J(i, 2) = db * diff;
            J(i, 3) = a * db * std::log(fd.d[i]) * diff;
        }
        w(i) = fd.weight[i];
    }
    if (n > npar) {
        Eigen::MatrixXd info = J.transpose() * w.asDiagonal() * J;
        Eigen::MatrixXd cov = info.completeOrthogonalDecomposition().pseudoInverse() * (best / (double)(n - npar));
        r.A_err = std::sqrt(std::max(0.0, cov(0, 0)));
        r.p_th_err = std::sqrt(std::max(0.0, cov(1, 1)));
        if (!fd.fixed) {
            r.a_err = std::sqrt(std::max(0.0, cov(2, 2)));
            r.b_err = std::sqrt(std::max(0.0, cov(3, 3)));
        }
    }
    return r;
}

namespace {

void sort_by_p(std::vector<DataPoint> &pts) {
    std::sort(pts.begin(), pts.end(), [](const DataPoint &x, const DataPoint &y) { return x.p < y.p; });
}

// Root of the line through (x0, y0), (x1, y1), mapped back out of log space.
double log_crossing(double x0, double y0, double x1, double y1) {
    if (y0 == y1) {
        return std::exp(x0);
    }
    return std::exp(x0 + (x1 - x0) * y0 / (y0 - y1));
}

}  // namespace

double pseudo_threshold(std::vector<DataPoint> points) {
    sort_by_p(points);
    for (const auto &pt : points) {
        if (!(pt.per_round_rate > 0) || !(pt.p > 0)) {
            throw std::invalid_argument("pseudo_threshold needs positive rates");
        }
    }
    for (size_t i = 0; i + 1 < points.size(); i++) {
        double x0 = std::log(points[i].p), x1 = std::log(points[i + 1].p);
        double y0 = std::log(points[i].per_round_rate) - x0;
        double y1 = std::log(points[i + 1].per_round_rate) - x1;
        if (y0 == 0) {
            return points[i].p;
        }
        if ((y0 < 0) != (y1 < 0) || y1 == 0) {
            return log_crossing(x0, y0, x1, y1);
        }
    }
    throw std::invalid_argument("points do not bracket the rate = p crossing");
}

std::vector<double> curve_crossings(std::vector<DataPoint> a, std::vector<DataPoint> b) {
    sort_by_p(a);
    sort_by_p(b);
    std::vector<std::pair<double, double>> diff;  // (log p, log rate_a - log rate_b)
    size_t j = 0;
    for (const auto &pa : a) {
        while (j < b.size() && b[j].p < pa.p) {
            j++;
        }
        if (j < b.size() && b[j].p == pa.p && pa.per_round_rate > 0 && b[j].per_round_rate > 0) {
            diff.emplace_back(std::log(pa.p), std::log(pa.per_round_rate) - std::log(b[j].per_round_rate));
        }
    }
    std::vector<double> out;
    for (size_t i = 0; i + 1 < diff.size(); i++) {
        auto [x0, y0] = diff[i];
        auto [x1, y1] = diff[i + 1];
        if (y0 == 0) {
            out.push_back(std::exp(x0));
        } else if ((y0 < 0) != (y1 < 0) && y1 != 0) {
            out.push_back(log_crossing(x0, y0, x1, y1));
        }
    }
    if (!diff.empty() && diff.back().second == 0) {
        out.push_back(std::exp(diff.back().first));
    }
    return out;
}

std::string points_csv_header() { return "code_id,d,p,m,model,shots,failures,rounds,per_round_rate,std_error"; }

namespace {

// Quotes a CSV field when it contains a separator or quote, doubling inner quotes.
std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> f(1);
    bool quoted = false;
    for (size_t i = 0; i < line.size(); i++) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                f.back() += '"';
                i++;
            } else if (c == '"') {
                quoted = false;
            } else {
                f.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            f.emplace_back();
        } else {
            f.back() += c;
        }
    }
    if (quoted) {
        throw std::invalid_argument("unterminated quote in csv row: " + line);
    }
    return f;
}

}  // namespace

std::string to_csv_row(const DataPoint &pt) {
    std::ostringstream os;
    os.precision(17);
    os << csv_field(pt.code_id) << ',' << pt.d << ',' << pt.p << ',' << pt.m << ',' << to_string(pt.model) << ',' << pt.shots
       << ',' << pt.failures << ',' << pt.rounds << ',' << pt.per_round_rate << ',' << pt.std_error;
    return os.str();
}

std::vector<DataPoint> points_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::vector<DataPoint> out;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (first && line.rfind("code_id", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 10) {
            throw std::invalid_argument("bad point row: " + line);
        }
        DataPoint pt;
        pt.code_id = f[0];
        pt.d = std::stoul(f[1]);
        pt.p = std::stod(f[2]);
        pt.m = std::stod(f[3]);
        pt.model = model_from_string(f[4]);
        pt.shots = std::stoul(f[5]);
        pt.failures = std::stoul(f[6]);
        pt.rounds = std::stoul(f[7]);
        pt.per_round_rate = std::stod(f[8]);
        pt.std_error = std::stod(f[9]);
        pt.validate();
        out.push_back(pt);
    }
    return out;
}

}  // namespace cavqec

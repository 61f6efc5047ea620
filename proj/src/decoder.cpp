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

#include "cavqec/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "cavqec/packed.hpp"

namespace cavqec {

namespace {

constexpr double kClip = 50.0;

double clip(double v) { return std::max(-kClip, std::min(kClip, v)); }

// Edge lists of a Tanner graph. Edges are numbered check-major; var_edge lists each
// variable's edges contiguously starting at var_start[v].
struct Tanner {
    std::vector<size_t> check_start;
    std::vector<uint32_t> edge_var;
    std::vector<size_t> var_start;
    std::vector<uint32_t> var_edge;

    explicit Tanner(const BitMatrix &h) : check_start(h.rows + 1, 0), var_start(h.cols + 1, 0) {
        for (size_t c = 0; c < h.rows; c++) {
            check_start[c + 1] = check_start[c] + h.row_supports[c].size();
            for (uint32_t v : h.row_supports[c]) {
                edge_var.push_back(v);
                var_start[v + 1]++;
            }
        }
        for (size_t v = 0; v < h.cols; v++) {
            var_start[v + 1] += var_start[v];
        }
        var_edge.resize(edge_var.size());
        std::vector<size_t> fill(var_start.begin(), var_start.end() - 1);
        for (size_t e = 0; e < edge_var.size(); e++) {
            var_edge[fill[edge_var[e]]++] = (uint32_t)e;
        }
    }
};

// Columns by descending soft value, ascending index on ties.
std::vector<uint32_t> soft_order(const std::vector<double> &soft) {
    std::vector<uint32_t> order(soft.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return soft[a] > soft[b]; });
    return order;
}

// Incremental column elimination for OSD. Each accepted column becomes a basis vector
// whose lowest set row is its pivot; `combo` records which accepted columns it sums.
class OsdEliminator {
   public:
    OsdEliminator(const BitMatrix &ht, size_t rows)
        : ht_(ht), rows_(rows), w_(words_for(rows)), cw_(words_for(rows)), pivot_at_(rows, -1) {}

    // Returns true if the column was independent and got accepted.
    bool add_column(uint32_t col) {
        std::vector<uint64_t> v(w_, 0), combo(cw_, 0);
        for (uint32_t r : ht_.row_supports[col]) {
            flip_bit(v.data(), r);
        }
        set_bit(combo.data(), selected_.size());
        size_t first = reduce(v, combo);
        if (first == rows_) {
            return false;
        }
        pivot_at_[first] = (int)vecs_.size();
        last_pivot_ = first;
        vecs_.push_back(std::move(v));
        combos_.push_back(std::move(combo));
        selected_.push_back(col);
        return true;
    }

    // Sweeps set bits low to high, clearing every pivot position. Returns the lowest
    // surviving bit or rows_ if the vector vanished.
    size_t reduce(std::vector<uint64_t> &v, std::vector<uint64_t> &combo) const {
        size_t first = rows_;
        for (size_t b = next_set_bit(v.data(), 0, rows_); b < rows_; b = next_set_bit(v.data(), b + 1, rows_)) {
            int p = pivot_at_[b];
            if (p >= 0) {
                xor_words(v.data(), vecs_[p].data(), w_);
                xor_words(combo.data(), combos_[p].data(), cw_);
            } else if (first == rows_) {
                first = b;
            }
        }
        return first;
    }

    // Solution supported on accepted columns, or nullopt if s is outside their span.
    std::optional<std::vector<uint32_t>> solve(const std::vector<uint64_t> &s) const {
        std::vector<uint64_t> v = s, combo(cw_, 0);
        if (reduce(v, combo) != rows_) {
            return std::nullopt;
        }
        return columns_of(combo);
    }

    // Keeps a fully reduced residual reduced after the latest column was accepted.
    void absorb_last(std::vector<uint64_t> &res, std::vector<uint64_t> &res_combo) const {
        size_t b = last_pivot_;
        if (get_bit(res.data(), b)) {
            xor_words(res.data(), vecs_.back().data(), w_);
            xor_words(res_combo.data(), combos_.back().data(), cw_);
        }
    }

    std::vector<uint32_t> columns_of(const std::vector<uint64_t> &combo) const {
        std::vector<uint32_t> out;
        for (size_t t = next_set_bit(combo.data(), 0, selected_.size()); t < selected_.size();
             t = next_set_bit(combo.data(), t + 1, selected_.size())) {
            out.push_back(selected_[t]);
        }
        return out;
    }

    const std::vector<uint32_t> &selected() const { return selected_; }
    size_t words() const { return w_; }

   private:
    const BitMatrix &ht_;
    size_t rows_;
    size_t w_;
    size_t cw_;
    std::vector<int> pivot_at_;
    std::vector<std::vector<uint64_t>> vecs_;
    std::vector<std::vector<uint64_t>> combos_;
    std::vector<uint32_t> selected_;
    size_t last_pivot_ = 0;
};

std::vector<uint64_t> pack_vector(const BitVector &s) {
    std::vector<uint64_t> w(words_for(s.length), 0);
    for (uint32_t r : s.support) {
        set_bit(w.data(), r);
    }
    return w;
}

BitVector osd0_impl(const BitMatrix &ht, size_t rows, const std::vector<double> &soft, const BitVector &s) {
    BitVector out(ht.rows);
    if (s.is_zero()) {
        return out;
    }
    OsdEliminator elim(ht, rows);
    // The residual syndrome is kept reduced against the growing basis. Once it vanishes
    // the remaining columns cannot change the solution: the full pivot set is a superset
    // of the current one and the solution on it is unique.
    std::vector<uint64_t> res = pack_vector(s), res_combo(words_for(rows), 0);
    for (uint32_t col : soft_order(soft)) {
        if (!elim.add_column(col)) {
            continue;
        }
        elim.absorb_last(res, res_combo);
        if (!any_words(res.data(), res.size())) {
            out.support = elim.columns_of(res_combo);
            std::sort(out.support.begin(), out.support.end());
            return out;
        }
        if (elim.selected().size() == rows) {
            break;
        }
    }
    throw InfeasibleSyndrome();
}

BpResult bp_run(const BitMatrix &h, const Tanner &g, const std::vector<double> &llr, const BitVector &s,
                const DecoderConfig &cfg);

}  // namespace

void DecoderConfig::validate() const {
    if (max_iterations < 1) {
        throw std::invalid_argument("BP needs at least one iteration");
    }
    if (!(min_sum_scale > 0 && min_sum_scale <= 1)) {
        throw std::invalid_argument("min-sum scale must lie in (0, 1]");
    }
}

BpResult bp_decode(const BitMatrix &h, const std::vector<double> &priors, const BitVector &s, const DecoderConfig &cfg) {
    cfg.validate();
    if (priors.size() != h.cols || s.length != h.rows) {
        throw std::invalid_argument("bp_decode dimension mismatch");
    }
    std::vector<double> llr(h.cols);
    for (size_t j = 0; j < h.cols; j++) {
        double p = priors[j];
        if (!(p > 0 && p <= 0.5)) {
            throw std::invalid_argument("BP priors must lie in (0, 0.5]");
        }
        llr[j] = std::log((1 - p) / p);
    }
    return bp_run(h, Tanner(h), llr, s, cfg);
}

namespace {

BpResult bp_run(const BitMatrix &h, const Tanner &g, const std::vector<double> &llr, const BitVector &s,
                const DecoderConfig &cfg) {
    std::vector<uint8_t> syn = s.to_bits();
    size_t E = g.edge_var.size();
    // One message per edge, updated in place: after the check sweep it holds the check to
    // variable message, after the variable sweep the variable to check message. Messages
    // are clipped to +-50, so single precision loses nothing that matters.
    const float lim = (float)kClip;
    const float scale = (float)cfg.min_sum_scale;
    std::vector<float> msg(E);
    std::vector<double> post(llr);
    for (size_t e = 0; e < E; e++) {
        msg[e] = (float)clip(llr[g.edge_var[e]]);
    }
    std::vector<uint8_t> hard(h.cols, 0);
    BpResult out;
    for (size_t it = 1; it <= cfg.max_iterations; it++) {
        for (size_t c = 0; c < h.rows; c++) {
            size_t b = g.check_start[c], e_end = g.check_start[c + 1];
            if (e_end - b == 1) {
                msg[b] = syn[c] ? -lim : lim;
                continue;
            }
            float min1 = INFINITY, min2 = INFINITY;
            size_t arg = b;
            bool neg = syn[c];
            for (size_t e = b; e < e_end; e++) {
                float m = msg[e];
                neg ^= m < 0;
                float a = std::fabs(m);
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    arg = e;
                } else if (a < min2) {
                    min2 = a;
                }
            }
            float m1 = std::min(lim, scale * min1), m2 = std::min(lim, scale * min2);
            for (size_t e = b; e < e_end; e++) {
                float mag = e == arg ? m2 : m1;
                msg[e] = (neg != (msg[e] < 0)) ? -mag : mag;
            }
        }
        for (size_t j = 0; j < h.cols; j++) {
            double total = llr[j];
            size_t b = g.var_start[j], e_end = g.var_start[j + 1];
            for (size_t k = b; k < e_end; k++) {
                total += msg[g.var_edge[k]];
            }
            post[j] = total;
            hard[j] = total <= 0;
            for (size_t k = b; k < e_end; k++) {
                float &m = msg[g.var_edge[k]];
                m = (float)clip(total - m);
            }
        }
        out.iterations = it;
        bool ok = true;
        for (size_t c = 0; c < h.rows && ok; c++) {
            uint8_t parity = syn[c];
            for (size_t e = g.check_start[c]; e < g.check_start[c + 1]; e++) {
                parity ^= hard[g.edge_var[e]];
            }
            ok = parity == 0;
        }
        out.converged = ok;
        if (ok && cfg.stop_on_syndrome) {
            break;
        }
    }
    out.soft.resize(h.cols);
    for (size_t j = 0; j < h.cols; j++) {
        out.soft[j] = 1 / (1 + std::exp(post[j]));
    }
    out.hard = BitVector::from_bits(hard);
    return out;
}

}  // namespace

BitVector osd0(const BitMatrix &h, const std::vector<double> &soft, const BitVector &s) {
    if (soft.size() != h.cols || s.length != h.rows) {
        throw std::invalid_argument("osd0 dimension mismatch");
    }
    return osd0_impl(h.transpose(), h.rows, soft, s);
}

BitVector osd_w(const BitMatrix &h, const std::vector<double> &soft, const BitVector &s, const DecoderConfig &cfg) {
    if (soft.size() != h.cols || s.length != h.rows) {
        throw std::invalid_argument("osd_w dimension mismatch");
    }
    BitMatrix ht = h.transpose();
    BitVector best = osd0_impl(ht, h.rows, soft, s);
    if (cfg.osd_sweep_depth == 0 || s.is_zero()) {
        return best;
    }
    OsdEliminator elim(ht, h.rows);
    std::vector<uint32_t> non_pivot;
    for (uint32_t col : soft_order(soft)) {
        if (!elim.add_column(col)) {
            non_pivot.push_back(col);
        }
    }
    size_t depth = std::min(cfg.osd_sweep_depth, non_pivot.size());
    auto target = pack_vector(s);
    auto try_flips = [&](std::initializer_list<uint32_t> flips) {
        std::vector<uint64_t> t = target;
        for (uint32_t col : flips) {
            for (uint32_t r : ht.row_supports[col]) {
                flip_bit(t.data(), r);
            }
        }
        auto sol = elim.solve(t);
        if (!sol) {
            return;
        }
        size_t weight = sol->size() + flips.size();
        if (weight < best.weight()) {
            std::vector<uint32_t> support = *sol;
            support.insert(support.end(), flips.begin(), flips.end());
            best.support = support;
            std::sort(best.support.begin(), best.support.end());
        }
    };
    for (size_t a = 0; a < depth; a++) {
        try_flips({non_pivot[a]});
    }
    for (size_t a = 0; a < depth; a++) {
        for (size_t b = a + 1; b < depth; b++) {
            try_flips({non_pivot[a], non_pivot[b]});
        }
    }
    return best;
}

struct Decoder::Graph {
    Tanner tanner;
    BitMatrix ht;
    std::vector<double> llr;
};

Decoder::Decoder(const DetectorErrorModel &dem, DecoderConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    BitMatrix ht(dem.mechanisms.size(), dem.detector_count);
    BitMatrix lt(dem.mechanisms.size(), dem.observable_count);
    for (size_t j = 0; j < dem.mechanisms.size(); j++) {
        const auto &m = dem.mechanisms[j];
        ht.row_supports[j] = m.detectors;
        lt.row_supports[j] = m.observables;
        // Merged mechanisms can exceed 1/2; BP needs a finite, non-negative LLR.
        priors_.push_back(std::min(0.5, std::max(m.p, 1e-300)));
    }
    h_ = ht.transpose();
    l_ = lt.transpose();
    std::vector<double> llr;
    for (double p : priors_) {
        llr.push_back(std::log((1 - p) / p));
    }
    graph_ = std::make_shared<const Graph>(Graph{Tanner(h_), std::move(ht), std::move(llr)});
}

DecodeResult Decoder::decode(const BitVector &detectors) const {
    if (detectors.length != h_.rows) {
        throw std::invalid_argument("detector vector length does not match the DEM");
    }
    DecodeResult r;
    BpResult bp = bp_run(h_, graph_->tanner, graph_->llr, detectors, cfg_);
    r.converged = bp.converged;
    r.soft_outputs = std::move(bp.soft);
    if (r.converged) {
        r.correction = std::move(bp.hard);
    } else if (cfg_.osd_order == 0) {
        r.correction = osd0_impl(graph_->ht, h_.rows, r.soft_outputs, detectors);
    } else {
        r.correction = osd_w(h_, r.soft_outputs, detectors, cfg_);
    }
    r.predicted_observables = l_.multiply(r.correction);
    return r;
}

std::vector<uint64_t> Decoder::predict(const uint64_t *detector_row, bool *converged) const {
    BitVector s(h_.rows);
    for (size_t d = next_set_bit(detector_row, 0, h_.rows); d < h_.rows; d = next_set_bit(detector_row, d + 1, h_.rows)) {
        s.support.push_back((uint32_t)d);
    }
    std::vector<uint64_t> out(words_for(l_.rows), 0);
    if (s.is_zero()) {
        if (converged) {
            *converged = true;
        }
        return out;
    }
    DecodeResult r = decode(s);
    if (converged) {
        *converged = r.converged;
    }
    for (uint32_t k : r.predicted_observables.support) {
        set_bit(out.data(), k);
    }
    return out;
}

DecodeResult decode_shot(const DetectorErrorModel &dem, const BitVector &detectors, const DecoderConfig &cfg) {
    return Decoder(dem, cfg).decode(detectors);
}

}  // namespace cavqec

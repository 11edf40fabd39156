#include "osd/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "osd/channel.hpp"
#include "osd/parallel.hpp"
#include "osd/stats.hpp"

namespace osd {

unsigned SnrOrderTable::selected_order(double ebn0_db) const {
    if (rows.empty()) throw std::logic_error("SnrOrderTable: empty");
    double best_snr = rows.front().ebn0_db;
    double best_dist = std::abs(ebn0_db - best_snr);
    for (const auto& row : rows) {
        const double d = std::abs(ebn0_db - row.ebn0_db);
        // ties snap toward the lower SNR, i.e. the more cautious order
        if (d < best_dist - 1e-12 ||
            (std::abs(d - best_dist) <= 1e-12 && row.ebn0_db < best_snr)) {
            best_dist = d;
            best_snr = row.ebn0_db;
        }
    }
    for (const auto& row : rows)
        if (row.ebn0_db == best_snr && row.selected) return row.order;
    throw std::logic_error("SnrOrderTable: no selected row at grid point");
}

std::vector<double> SnrOrderTable::grid() const {
    std::vector<double> g;
    for (const auto& row : rows)
        if (g.empty() || g.back() != row.ebn0_db) g.push_back(row.ebn0_db);
    return g;
}

void SnrOrderTable::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write table file: " + path);
    out << "ebn0_db,order,cer,ci_halfwidth,selected\n";
    char buf[64];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.6g,%u,%.6g,%.6g,%d", row.ebn0_db,
                      row.order, row.cer, row.ci_halfwidth,
                      row.selected ? 1 : 0);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

SnrOrderTable SnrOrderTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "ebn0_db,order,cer,ci_halfwidth,selected")
        throw std::runtime_error("bad table header in " + path);

    SnrOrderTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SnrOrderRow row;
        int selected = 0;
        if (std::sscanf(line.c_str(), "%lf,%u,%lf,%lf,%d", &row.ebn0_db,
                        &row.order, &row.cer, &row.ci_halfwidth,
                        &selected) != 5)
            throw std::runtime_error("bad table row in " + path);
        row.selected = selected != 0;
        table.l_m = std::max(table.l_m, row.order);
        table.rows.push_back(row);
    }
    if (table.rows.empty())
        throw std::runtime_error("table has no rows: " + path);
    return table;
}

unsigned select_order_threshold(std::span<const double> f, double tau) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] >= tau) return static_cast<unsigned>(i);
    return static_cast<unsigned>(f.size() - 1);
}

unsigned select_order_classifier(std::span<const double> p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[best]) best = i;
    return static_cast<unsigned>(best);
}

SnrOrderTable calibrate_table(const Code& code, std::span<const double> snr_db,
                              unsigned l_m, std::size_t trials_per_point,
                              double target_cer, std::uint64_t seed,
                              unsigned threads) {
    if (snr_db.empty() || trials_per_point == 0)
        throw std::invalid_argument("calibrate_table: bad arguments");

    SnrOrderTable table;
    table.target_cer = target_cer;
    table.l_m = l_m;

    for (std::size_t p = 0; p < snr_db.size(); ++p) {
        DatasetParams point;
        point.l_m = l_m;
        point.n_records = trials_per_point;
        point.snr_db = {snr_db[p]};
        point.seed = seed;

        // one decoding pass per trial labels every order at once
        std::vector<std::uint8_t> ok(trials_per_point * (l_m + 1));
        parallel_for(trials_per_point, threads, [&](std::size_t t) {
            TrialRecord rec = run_trial(code, point, p * trials_per_point + t);
            for (unsigned l = 0; l <= l_m; ++l)
                ok[t * (l_m + 1) + l] = rec.success[l];
        });

        unsigned selected = l_m;
        bool found = false;
        std::vector<SnrOrderRow> point_rows;
        for (unsigned l = 0; l <= l_m; ++l) {
            std::size_t errors = 0;
            for (std::size_t t = 0; t < trials_per_point; ++t)
                if (!ok[t * (l_m + 1) + l]) ++errors;
            SnrOrderRow row;
            row.ebn0_db = snr_db[p];
            row.order = l;
            row.cer = static_cast<double>(errors) /
                      static_cast<double>(trials_per_point);
            row.ci_halfwidth = wilson95(errors, trials_per_point).halfwidth;
            point_rows.push_back(row);
            if (!found && row.cer <= target_cer) {
                selected = l;
                found = true;
            }
        }
        point_rows[selected].selected = true;
        table.rows.insert(table.rows.end(), point_rows.begin(),
                          point_rows.end());
    }
    return table;
}

ThresholdCalibration calibrate_threshold_from_scores(
    const std::vector<std::vector<double>>& scores,
    std::span<const TrialRecord> validation, double target_cer) {
    if (scores.size() != validation.size() || validation.empty())
        throw std::invalid_argument(
            "calibrate_threshold: scores/validation mismatch");

    ThresholdCalibration cal;
    std::optional<double> chosen;
    for (double tau : kTauGrid) {
        std::size_t errors = 0;
        std::size_t order_sum = 0;
        for (std::size_t i = 0; i < validation.size(); ++i) {
            const unsigned l = select_order_threshold(scores[i], tau);
            order_sum += l;
            if (!validation[i].success[l]) ++errors;
        }
        ThresholdSweepPoint pt;
        pt.tau = tau;
        pt.cer = static_cast<double>(errors) /
                 static_cast<double>(validation.size());
        pt.mean_order = static_cast<double>(order_sum) /
                        static_cast<double>(validation.size());
        if (!chosen && pt.cer <= target_cer) {
            chosen = tau;
            pt.selected = true;
        }
        cal.sweep.push_back(pt);
    }
    if (!chosen) {
        chosen = cal.sweep.back().tau;
        cal.sweep.back().selected = true;
    }
    cal.tau = *chosen;
    return cal;
}

ThresholdCalibration calibrate_threshold(const MlpModel& model,
                                         std::span<const TrialRecord> validation,
                                         double target_cer) {
    if (model.mode != PredictorMode::success)
        throw std::invalid_argument(
            "calibrate_threshold: needs a success-mode model");
    std::vector<std::vector<double>> scores(validation.size());
    for (std::size_t i = 0; i < validation.size(); ++i)
        scores[i] = model.forward(validation[i].features);
    return calibrate_threshold_from_scores(scores, validation, target_cer);
}

SelectionPolicy SelectionPolicy::parse(const std::string& text, unsigned l_m) {
    SelectionPolicy p;
    p.l_m = l_m;
    if (text.rfind("fixed(", 0) == 0 && text.back() == ')') {
        p.kind = Kind::fixed;
        const std::string inner = text.substr(6, text.size() - 7);
        std::size_t pos = 0;
        const unsigned l = std::stoul(inner, &pos);
        if (pos != inner.size())
            throw std::invalid_argument("bad policy: " + text);
        if (l > l_m)
            throw std::invalid_argument("fixed order exceeds l_m: " + text);
        p.fixed_order = l;
        return p;
    }
    if (text == "baseline-known-snr") {
        p.kind = Kind::baseline_known_snr;
        return p;
    }
    if (text == "baseline-estimated-snr") {
        p.kind = Kind::baseline_estimated_snr;
        return p;
    }
    if (text == "nn-classifier") {
        p.kind = Kind::nn_classifier;
        return p;
    }
    if (text == "nn-threshold") {
        p.kind = Kind::nn_threshold;
        return p;
    }
    throw std::invalid_argument("unknown policy: " + text);
}

std::string SelectionPolicy::name() const {
    switch (kind) {
        case Kind::fixed:
            return "fixed(" + std::to_string(fixed_order) + ")";
        case Kind::baseline_known_snr:
            return "baseline-known-snr";
        case Kind::baseline_estimated_snr:
            return "baseline-estimated-snr";
        case Kind::nn_classifier:
            return "nn-classifier";
        case Kind::nn_threshold:
            return "nn-threshold";
    }
    return "?";
}

void SelectionPolicy::validate() const {
    switch (kind) {
        case Kind::fixed:
            if (fixed_order > l_m)
                throw std::invalid_argument("policy: fixed order exceeds l_m");
            break;
        case Kind::baseline_known_snr:
        case Kind::baseline_estimated_snr:
            if (!table)
                throw std::invalid_argument("policy: table_path required");
            if (table->l_m > l_m)
                throw std::invalid_argument("policy: table orders exceed l_m");
            break;
        case Kind::nn_classifier:
        case Kind::nn_threshold:
            if (!model)
                throw std::invalid_argument("policy: model_path required");
            if (model->dims[3] != l_m + 1)
                throw std::invalid_argument(
                    "policy: model output width != l_m + 1");
            if (kind == Kind::nn_threshold &&
                (tau < 0.0 || tau > 1.0))
                throw std::invalid_argument("policy: tau outside [0,1]");
            if (kind == Kind::nn_threshold &&
                model->mode != PredictorMode::success)
                throw std::invalid_argument(
                    "policy: nn-threshold needs a success-mode model");
            break;
    }
}

unsigned select_order(const SelectionPolicy& policy, std::span<const double> y,
                      const OsdContext& ctx, double ebn0_db, double rate) {
    switch (policy.kind) {
        case SelectionPolicy::Kind::fixed:
            return policy.fixed_order;
        case SelectionPolicy::Kind::baseline_known_snr:
            return std::min(policy.table->selected_order(ebn0_db), policy.l_m);
        case SelectionPolicy::Kind::baseline_estimated_snr: {
            const double est = estimate_sigma2(y);
            return std::min(
                policy.table->selected_order(ebn0_db_from_sigma2(est, rate)),
                policy.l_m);
        }
        case SelectionPolicy::Kind::nn_classifier:
            return std::min(
                select_order_classifier(
                    policy.model->forward(predictor_features(ctx))),
                policy.l_m);
        case SelectionPolicy::Kind::nn_threshold:
            return std::min(
                select_order_threshold(
                    policy.model->forward(predictor_features(ctx)),
                    policy.tau),
                policy.l_m);
    }
    throw std::logic_error("select_order: bad policy kind");
}

}  // namespace osd

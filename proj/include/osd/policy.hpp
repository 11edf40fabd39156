#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osd/codes.hpp"
#include "osd/dataset.hpp"
#include "osd/mlp.hpp"
#include "osd/osd.hpp"

// Decision policies mapping a reception to a decoding order: fixed order,
// SNR-table baseline (known or estimated SNR), and the two network rules.

namespace osd {

struct SnrOrderRow {
    double ebn0_db = 0.0;
    unsigned order = 0;
    double cer = 0.0;
    double ci_halfwidth = 0.0;
    bool selected = false;
};

// Per-SNR minimum order meeting the target CER, estimated by Monte Carlo.
struct SnrOrderTable {
    double target_cer = 1e-2;
    unsigned l_m = 0;
    std::vector<SnrOrderRow> rows;  // grouped by SNR, orders ascending

    unsigned selected_order(double ebn0_db) const;  // nearest grid point,
                                                    // ties toward lower SNR
    std::vector<double> grid() const;

    void save_csv(const std::string& path) const;
    static SnrOrderTable load_csv(const std::string& path);
};

// smallest i with f[i] >= tau, else l_m (= f.size()-1)
unsigned select_order_threshold(std::span<const double> f, double tau);

// argmax, ties to the smaller order
unsigned select_order_classifier(std::span<const double> p);

SnrOrderTable calibrate_table(const Code& code, std::span<const double> snr_db,
                              unsigned l_m, std::size_t trials_per_point,
                              double target_cer, std::uint64_t seed,
                              unsigned threads = 0);

struct ThresholdSweepPoint {
    double tau = 0.0;
    double cer = 0.0;
    double mean_order = 0.0;
    bool selected = false;
};

struct ThresholdCalibration {
    double tau = 0.0;
    std::vector<ThresholdSweepPoint> sweep;
};

inline constexpr double kTauGrid[] = {0.5, 0.6, 0.7, 0.8, 0.9, 0.99};

// Replays selection on validation records from per-record scores and the
// stored success bits; no decoding happens here. Returns the smallest grid
// tau whose empirical CER meets the target, else the largest.
ThresholdCalibration calibrate_threshold_from_scores(
    const std::vector<std::vector<double>>& scores,
    std::span<const TrialRecord> validation, double target_cer);

// scores come from a success-mode model applied to each record's features
ThresholdCalibration calibrate_threshold(const MlpModel& model,
                                         std::span<const TrialRecord> validation,
                                         double target_cer);

struct SelectionPolicy {
    enum class Kind {
        fixed,
        baseline_known_snr,
        baseline_estimated_snr,
        nn_classifier,
        nn_threshold,
    };

    Kind kind = Kind::fixed;
    unsigned fixed_order = 0;
    double tau = 0.9;
    unsigned l_m = 2;
    const SnrOrderTable* table = nullptr;
    const MlpModel* model = nullptr;

    // "fixed(2)", "baseline-known-snr", "baseline-estimated-snr",
    // "nn-classifier", "nn-threshold"
    static SelectionPolicy parse(const std::string& text, unsigned l_m);
    std::string name() const;

    // throws if the variant's table/model is missing or inconsistent
    void validate() const;
};

// Dispatch per reception. `ebn0_db` is the true operating point, used only
// by the known-SNR baseline; the estimated baseline re-estimates from y.
unsigned select_order(const SelectionPolicy& policy, std::span<const double> y,
                      const OsdContext& ctx, double ebn0_db, double rate);

}  // namespace osd

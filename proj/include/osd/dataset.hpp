#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osd/codes.hpp"
#include "osd/mlp.hpp"
#include "osd/osd.hpp"

// Labeled decoding trials for the order predictor: per-order success flags
// and the minimal successful order, with features taken from the permuted
// observation and the order-0 candidate.

namespace osd {

struct TrialRecord {
    double ebn0_db = 0.0;
    std::vector<double> features;       // length 2N: z then 2*a0 - 1
    std::vector<std::uint8_t> success;  // length l_m + 1, per-order outcome
    unsigned l_star = 0;  // minimal successful order, l_m when none succeed
};

struct DatasetParams {
    unsigned l_m = 2;
    std::size_t n_records = 0;
    std::vector<double> snr_db;  // record r runs at snr_db[r % size]
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

// min i with bits[i] set, else l_m
unsigned label_from_success(std::span<const std::uint8_t> bits, unsigned l_m);

std::vector<double> predictor_features(const OsdContext& ctx);

// uniformly random message on stream (seed, stream_index)
BitVector random_message(std::size_t k, RngStream& rng);

// One labeled trial: encode a random message, transmit, decode at every
// order 0..l_m, compare against the transmitted codeword. Stream index
// `record_index` makes any record reproducible in isolation.
TrialRecord run_trial(const Code& code, const DatasetParams& params,
                      std::size_t record_index);

// requires n_records divisible by snr_db.size()
std::vector<TrialRecord> generate_dataset(const Code& code,
                                          const DatasetParams& params);

// CSV columns: ebn0_db, l_star, success_0..success_lm, f_0..f_{2N-1}
void save_dataset_csv(const std::string& path,
                      const std::vector<TrialRecord>& records);
std::vector<TrialRecord> load_dataset_csv(const std::string& path);

TrainingData to_training_data(std::span<const TrialRecord> records);

}  // namespace osd

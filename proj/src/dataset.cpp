#include "osd/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "osd/channel.hpp"
#include "osd/parallel.hpp"

namespace osd {

unsigned label_from_success(std::span<const std::uint8_t> bits, unsigned l_m) {
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) return static_cast<unsigned>(i);
    return l_m;
}

std::vector<double> predictor_features(const OsdContext& ctx) {
    std::vector<double> f;
    f.reserve(2 * ctx.n);
    f.insert(f.end(), ctx.z.begin(), ctx.z.end());
    for (std::size_t i = 0; i < ctx.n; ++i)
        f.push_back(ctx.a0.get(i) ? 1.0 : -1.0);
    return f;
}

BitVector random_message(std::size_t k, RngStream& rng) {
    BitVector u(k);
    auto words = u.words();
    for (auto& w : words) w = rng.next_u64();
    if (k % 64) words[words.size() - 1] &= (std::uint64_t(1) << (k % 64)) - 1;
    return u;
}

TrialRecord run_trial(const Code& code, const DatasetParams& params,
                      std::size_t record_index) {
    const double snr = params.snr_db[record_index % params.snr_db.size()];
    RngStream rng(params.seed, record_index);

    const BitVector msg = random_message(code.spec.k, rng);
    const BitVector cw = mat_vec_mul(code.generator, msg);
    const auto x = modulate(cw);
    const auto cp = ChannelParams::from_ebn0(snr, code.rate());
    const auto y = transmit(x, cp, rng);

    const OsdContext ctx = build_context(y, code.generator);
    const auto results = decode_orders(ctx, params.l_m);

    TrialRecord rec;
    rec.ebn0_db = snr;
    rec.features = predictor_features(ctx);
    rec.success.resize(params.l_m + 1);
    for (unsigned l = 0; l <= params.l_m; ++l)
        rec.success[l] = results[l].codeword == cw ? 1 : 0;
    rec.l_star = label_from_success(rec.success, params.l_m);
    return rec;
}

std::vector<TrialRecord> generate_dataset(const Code& code,
                                          const DatasetParams& params) {
    if (params.snr_db.empty())
        throw std::invalid_argument("generate_dataset: empty SNR list");
    if (params.n_records == 0 ||
        params.n_records % params.snr_db.size() != 0)
        throw std::invalid_argument(
            "generate_dataset: n_records must be a positive multiple of the "
            "SNR list size");

    std::vector<TrialRecord> records(params.n_records);
    parallel_for(params.n_records, params.threads, [&](std::size_t r) {
        records[r] = run_trial(code, params, r);
    });
    return records;
}

void save_dataset_csv(const std::string& path,
                      const std::vector<TrialRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("save_dataset_csv: no records");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);

    const std::size_t orders = records.front().success.size();
    const std::size_t feat = records.front().features.size();
    out << "ebn0_db,l_star";
    for (std::size_t i = 0; i < orders; ++i) out << ",success_" << i;
    for (std::size_t i = 0; i < feat; ++i) out << ",f_" << i;
    out << '\n';

    char buf[32];
    for (const auto& rec : records) {
        std::snprintf(buf, sizeof buf, "%.9g", rec.ebn0_db);
        out << buf << ',' << rec.l_star;
        for (auto s : rec.success) out << ',' << int(s);
        for (double f : rec.features) {
            std::snprintf(buf, sizeof buf, "%.9g", f);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<TrialRecord> load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("dataset file is empty: " + path);
    std::size_t orders = 0, feat = 0;
    {
        std::istringstream hs(header);
        std::string col;
        while (std::getline(hs, col, ',')) {
            if (col.rfind("success_", 0) == 0) ++orders;
            if (col.rfind("f_", 0) == 0) ++feat;
        }
    }
    if (orders == 0 || feat == 0)
        throw std::runtime_error("bad dataset header in " + path);

    std::vector<TrialRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        TrialRecord rec;
        auto next = [&]() -> std::string {
            if (!std::getline(ls, field, ','))
                throw std::runtime_error("short dataset row in " + path);
            return field;
        };
        rec.ebn0_db = std::stod(next());
        rec.l_star = static_cast<unsigned>(std::stoul(next()));
        rec.success.resize(orders);
        for (auto& s : rec.success)
            s = static_cast<std::uint8_t>(std::stoul(next()));
        rec.features.resize(feat);
        for (auto& f : rec.features) f = std::stod(next());
        if (std::getline(ls, field, ','))
            throw std::runtime_error("long dataset row in " + path);
        records.push_back(std::move(rec));
    }
    if (records.empty())
        throw std::runtime_error("dataset has no records: " + path);
    return records;
}

TrainingData to_training_data(std::span<const TrialRecord> records) {
    if (records.empty())
        throw std::invalid_argument("to_training_data: no records");
    TrainingData data;
    data.input_dim = records.front().features.size();
    data.num_orders = records.front().success.size();
    data.features.reserve(records.size() * data.input_dim);
    data.success.reserve(records.size() * data.num_orders);
    data.l_star.reserve(records.size());
    for (const auto& rec : records) {
        if (rec.features.size() != data.input_dim ||
            rec.success.size() != data.num_orders)
            throw std::invalid_argument("to_training_data: ragged records");
        data.features.insert(data.features.end(), rec.features.begin(),
                             rec.features.end());
        data.success.insert(data.success.end(), rec.success.begin(),
                            rec.success.end());
        data.l_star.push_back(static_cast<std::uint8_t>(rec.l_star));
    }
    return data;
}

}  // namespace osd

#pragma once

#include "pnsim/channel.hpp"
#include "pnsim/covariance.hpp"
#include "pnsim/errors.hpp"
#include "pnsim/estimators.hpp"
#include "pnsim/oracle.hpp"
#include "pnsim/pn_model.hpp"
#include "pnsim/ptrs.hpp"
#include "pnsim/qam.hpp"
#include "pnsim/rng.hpp"
#include "pnsim/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pnsim {

/// Accumulated quality measures of one Monte Carlo operating point. BER, SER
/// and EVM count data (non-pilot) positions only; phase_mse is the mean of
/// |e^{j phi_hat} - e^{j phi_true}|^2 over data positions against the oracle
/// rotation truth.
struct TrialMetrics {
    double ber = 0.0;
    double ser = 0.0;
    double phase_mse = 0.0;
    double evm = 0.0;
    long long n_bits = 0;
    long long n_bit_errors = 0;
    long long n_symbols = 0;
    long long n_sym_errors = 0;
    long long n_frames = 0;
};

/// Phase estimation algorithm selector with per-estimator parameters.
struct EstimatorSpec {
    enum class Kind { none, genie, cpee, ci, li, dct, interp_filter };

    Kind kind = Kind::cpee;
    Eigen::Index n_d = 2;                                    // dct
    DctReference dct_reference = DctReference::derotated;    // dct
    std::string cov_cache;                                   // interp_filter

    std::string name() const {
        switch (kind) {
        case Kind::none: return "none";
        case Kind::genie: return "genie";
        case Kind::cpee: return "cpee";
        case Kind::ci: return "ci";
        case Kind::li: return "li";
        case Kind::dct: return "dct" + std::to_string(n_d);
        case Kind::interp_filter: return "if";
        }
        return "?";
    }

    static EstimatorSpec parse(const std::string& name) {
        EstimatorSpec spec;
        if (name == "none") spec.kind = Kind::none;
        else if (name == "genie") spec.kind = Kind::genie;
        else if (name == "cpee") spec.kind = Kind::cpee;
        else if (name == "ci") spec.kind = Kind::ci;
        else if (name == "li") spec.kind = Kind::li;
        else if (name == "dct") spec.kind = Kind::dct;
        else if (name == "if") spec.kind = Kind::interp_filter;
        else throw ConfigError("unknown estimator name: " + name);
        return spec;
    }
};

/// One sweep output row.
struct SweepRow {
    std::string estimator;
    std::string pattern_kind;   // "distributed" | "contiguous"
    Eigen::Index l = 0;         // distributed spacing (0 when n/a)
    Eigen::Index n_g = 0;       // contiguous groups (0 when n/a)
    Eigen::Index n_s = 0;       // contiguous group size (0 when n/a)
    double snr_db = 0.0;
    TrialMetrics metrics;
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Engine-wide knobs. min_bit_errors <= 0 disables the adaptive stop and
/// always runs max_frames frames per point.
struct EngineParams {
    FrameConfig cfg;
    PnModel pn;
    std::uint64_t seed = 1;
    Eigen::Index max_frames = 200;
    long long min_bit_errors = 100;
    Eigen::Index train_frames = 2000;
    unsigned workers = 1;
};

namespace detail {

inline std::string g17(double v) { return format_g17(v); }

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct FrameEval {
    long long bit_errors = 0;
    long long sym_errors = 0;
    long long bits = 0;
    long long syms = 0;
    double mse_sum = 0.0;
    long long mse_count = 0;
    double evm_err = 0.0;
    double evm_ref = 0.0;
};

} // namespace detail

/// A spec bound to one (pattern, SNR) point: the DCT basis and the
/// interpolation filter are built once here and shared read-only afterwards.
struct PreparedEstimator {
    EstimatorSpec spec;
    DctBasis basis;  // dct
    IfFilter filter; // interp_filter
};

/// Monte Carlo driver. Frame realizations depend only on (seed, frame index),
/// never on the estimator or SNR under evaluation, so every estimator and
/// every SNR point of a sweep sees identical data, phase noise and (scaled)
/// noise draws: comparisons run under common random numbers.
class Engine {
public:
    explicit Engine(EngineParams params) : params_(std::move(params)) {
        params_.cfg.validate();
        if (params_.max_frames < 1)
            throw ConfigError("Engine: max_frames must be positive");
        if (params_.workers < 1)
            params_.workers = 1;
    }

    const EngineParams& params() const { return params_; }

    /// Pilot values shared by all frames of this engine's run.
    CVec pilots_for(const PtrsPattern& pattern) const {
        return pilot_sequence(pattern.k(), derive_seed(params_.seed, 0x9117));
    }

    /// Trained (or cached) second-order statistics for the engine's PN model.
    const CovarianceSet& covariances(const std::string& cache_path = {}) {
        if (!cov_) {
            if (!cache_path.empty()) {
                std::ifstream probe(cache_path);
                if (probe.good()) {
                    CovarianceSet loaded = load_covariances(cache_path);
                    if (loaded.meta.model_id != params_.pn.id ||
                        loaded.n_active() != params_.cfg.n_active)
                        throw ConfigError("covariance cache " + cache_path + " was trained for model " +
                                          loaded.meta.model_id + " at n_active " +
                                          std::to_string(loaded.n_active()) +
                                          "; current run uses " + params_.pn.id + " at " +
                                          std::to_string(params_.cfg.n_active));
                    cov_ = std::move(loaded);
                    return *cov_;
                }
            }
            cov_ = train_covariances(params_.cfg, params_.pn, params_.train_frames,
                                     derive_seed(params_.seed, 0x7124), 0.0, params_.workers);
            if (!cache_path.empty())
                save_covariances(*cov_, cache_path);
        }
        return *cov_;
    }

    void set_covariances(CovarianceSet cov) { cov_ = std::move(cov); }

    /// Effective per-subcarrier noise variance after the unit-power transmit
    /// scaling is undone at the receiver: sigma^2 * n_active / n_fft.
    double subcarrier_noise_variance(SnrPoint snr) const {
        return snr.noise_variance() * static_cast<double>(params_.cfg.n_active) /
               static_cast<double>(params_.cfg.n_fft);
    }

    PreparedEstimator prepare(const EstimatorSpec& spec, const PtrsPattern& pattern, SnrPoint snr) {
        PreparedEstimator prep;
        prep.spec = spec;
        if (spec.kind == EstimatorSpec::Kind::dct) {
            if (spec.n_d > pattern.k())
                throw ConfigError("dct estimator: n_d (" + std::to_string(spec.n_d) +
                                  ") must not exceed pilot count K (" + std::to_string(pattern.k()) +
                                  ")");
            prep.basis = build_dct_basis(pattern.n_active, pattern.chi_p, spec.n_d);
        } else if (spec.kind == EstimatorSpec::Kind::interp_filter) {
            const CovarianceSet& cov = covariances(spec.cov_cache);
            if (cov.n_active() != pattern.n_active)
                throw ConfigError("interpolation filter: covariance size differs from n_active");
            const CVec pilots = pilots_for(pattern);
            CVec s_p(pattern.k());
            for (Eigen::Index i = 0; i < pattern.k(); ++i)
                s_p[i] = std::conj(pilots[i]) / std::norm(pilots[i]);
            const CMat r_w = rw_model(subcarrier_noise_variance(snr), pattern.n_active);
            prep.filter = build_if_filter(cov.r_phi, cov.r_beta, r_w, sampling_matrix(pattern), s_p);
        }
        return prep;
    }

    /// Run one (pattern, estimator, SNR) operating point.
    TrialMetrics run_point(const PtrsPattern& pattern, const EstimatorSpec& estimator, SnrPoint snr) {
        std::vector<PreparedEstimator> prepared;
        prepared.push_back(prepare(estimator, pattern, snr));
        return run_point_multi(pattern, prepared, snr).front();
    }

    /// Evaluate several estimators on the same frame realizations. The
    /// adaptive stop triggers once every estimator has min_bit_errors errors
    /// (or the frame cap is reached).
    std::vector<TrialMetrics> run_point_multi(const PtrsPattern& pattern,
                                              const std::vector<PreparedEstimator>& prepared,
                                              SnrPoint snr) {
        validate_point(pattern, prepared);
        const CVec pilots = pilots_for(pattern);
        const auto n_est = prepared.size();

        std::vector<detail::FrameEval> totals(n_est);
        Eigen::Index processed = 0;
        constexpr Eigen::Index kBatch = 32; // fixed batch keeps the stop rule
                                            // independent of worker count
        std::vector<std::vector<detail::FrameEval>> slots(kBatch);
        while (processed < params_.max_frames) {
            const Eigen::Index hi = std::min(processed + kBatch, params_.max_frames);
            const Eigen::Index count = hi - processed;
            auto work = [&](unsigned wid, unsigned stride) {
                Waveform wf(params_.cfg);
                Fft fft;
                for (Eigen::Index i = wid; i < count; i += stride)
                    slots[static_cast<std::size_t>(i)] =
                        simulate_frame(pattern, pilots, prepared, snr, processed + i, wf, fft);
            };
            if (params_.workers <= 1 || count == 1) {
                work(0, 1);
            } else {
                std::vector<std::thread> pool;
                const unsigned n = std::min<unsigned>(params_.workers, static_cast<unsigned>(count));
                for (unsigned w = 0; w < n; ++w)
                    pool.emplace_back(work, w, n);
                for (auto& t : pool)
                    t.join();
            }
            for (Eigen::Index i = 0; i < count; ++i) {
                const auto& per_frame = slots[static_cast<std::size_t>(i)];
                for (std::size_t e = 0; e < n_est; ++e) {
                    totals[e].bit_errors += per_frame[e].bit_errors;
                    totals[e].sym_errors += per_frame[e].sym_errors;
                    totals[e].bits += per_frame[e].bits;
                    totals[e].syms += per_frame[e].syms;
                    totals[e].mse_sum += per_frame[e].mse_sum;
                    totals[e].mse_count += per_frame[e].mse_count;
                    totals[e].evm_err += per_frame[e].evm_err;
                    totals[e].evm_ref += per_frame[e].evm_ref;
                }
            }
            processed = hi;
            if (params_.min_bit_errors > 0) {
                bool all_done = true;
                for (const auto& t : totals)
                    all_done = all_done && t.bit_errors >= params_.min_bit_errors;
                if (all_done)
                    break;
            }
        }

        std::vector<TrialMetrics> out(n_est);
        for (std::size_t e = 0; e < n_est; ++e) {
            const auto& t = totals[e];
            out[e].n_bits = t.bits;
            out[e].n_bit_errors = t.bit_errors;
            out[e].n_symbols = t.syms;
            out[e].n_sym_errors = t.sym_errors;
            out[e].n_frames = processed;
            out[e].ber = t.bits ? static_cast<double>(t.bit_errors) / static_cast<double>(t.bits) : 0.0;
            out[e].ser = t.syms ? static_cast<double>(t.sym_errors) / static_cast<double>(t.syms) : 0.0;
            out[e].phase_mse = t.mse_count ? t.mse_sum / static_cast<double>(t.mse_count) : 0.0;
            out[e].evm = (t.evm_ref > 0.0) ? std::sqrt(t.evm_err / t.evm_ref) : 0.0;
        }
        return out;
    }

    /// Cartesian sweep over patterns, estimators and SNR points. All
    /// estimators of one (pattern, SNR) point share frame realizations.
    SweepResult sweep(const std::vector<PtrsPattern>& patterns,
                      const std::vector<EstimatorSpec>& estimators,
                      const std::vector<double>& snr_grid_db) {
        if (patterns.empty() || estimators.empty() || snr_grid_db.empty())
            throw ConfigError("sweep: patterns, estimators and SNR grid must be non-empty");
        SweepResult result;
        for (const auto& pattern : patterns) {
            for (double snr_db : snr_grid_db) {
                const SnrPoint snr{snr_db};
                std::vector<PreparedEstimator> prepared;
                prepared.reserve(estimators.size());
                for (const auto& est : estimators)
                    prepared.push_back(prepare(est, pattern, snr));
                const auto metrics = run_point_multi(pattern, prepared, snr);
                for (std::size_t e = 0; e < estimators.size(); ++e) {
                    SweepRow row;
                    row.estimator = estimators[e].name();
                    row.pattern_kind =
                        pattern.kind == PtrsPattern::Kind::distributed ? "distributed" : "contiguous";
                    row.l = pattern.l_spacing;
                    row.n_g = pattern.n_groups;
                    row.n_s = pattern.group_size;
                    row.snr_db = snr_db;
                    row.metrics = metrics[e];
                    row.seed = params_.seed;
                    result.rows.push_back(std::move(row));
                }
            }
        }
        return result;
    }

    /// Bisection search for the SNR reaching target_ber. Returns nullopt when
    /// the point stays above the target at snr_cap_db (an error floor). The
    /// returned value is the upper bracket edge; brackets end <= 0.1 dB wide.
    std::optional<double> snr_for_target_ber(const PtrsPattern& pattern,
                                             const EstimatorSpec& estimator, double target_ber,
                                             double snr_cap_db = 40.0) {
        if (!(target_ber > 0.0) || !(target_ber < 0.5))
            throw ConfigError("snr_for_target_ber: target must lie in (0, 0.5)");

        // Size the per-probe budget so that a point at the target BER yields
        // ~4x min_bit_errors errors before the cap.
        const long long bits_per_frame = static_cast<long long>(params_.cfg.n_symbols) *
                                         (params_.cfg.n_active - pattern.k()) *
                                         params_.cfg.mod_order;
        EngineParams probe_params = params_;
        const long long min_err = std::max<long long>(params_.min_bit_errors, 1);
        const double want_bits = 4.0 * static_cast<double>(min_err) / target_ber;
        probe_params.max_frames = std::max<Eigen::Index>(
            2, static_cast<Eigen::Index>(std::ceil(want_bits / static_cast<double>(bits_per_frame))));
        Engine probe(probe_params);
        if (cov_)
            probe.set_covariances(*cov_);

        auto ber_at = [&](double snr_db) {
            return probe.run_point(pattern, estimator, SnrPoint{snr_db}).ber;
        };

        if (ber_at(snr_cap_db) > target_ber)
            return std::nullopt;
        double hi = snr_cap_db;
        double lo = snr_cap_db - 8.0;
        constexpr double kSnrFloorDb = -40.0;
        while (ber_at(lo) <= target_ber) {
            hi = lo;
            lo -= 8.0;
            if (lo < kSnrFloorDb)
                return hi; // target met everywhere above the floor
        }
        while (hi - lo > 0.1) {
            const double mid = 0.5 * (lo + hi);
            if (ber_at(mid) > target_ber)
                lo = mid;
            else
                hi = mid;
        }
        if (!cov_ && probe.cov_)
            cov_ = probe.cov_; // keep covariances trained by the probe engine
        return hi;
    }

private:
    void validate_point(const PtrsPattern& pattern, const std::vector<PreparedEstimator>& prepared) const {
        if (pattern.n_active != params_.cfg.n_active)
            throw ConfigError("run_point: pattern built for a different n_active");
        if (pattern.k() < 1)
            throw ConfigError("run_point: pattern has no pilots");
        if (prepared.empty())
            throw ConfigError("run_point: no estimators");
        for (const auto& p : prepared) {
            if (p.spec.kind == EstimatorSpec::Kind::dct && p.spec.n_d > pattern.k())
                throw ConfigError("run_point: dct n_d exceeds pilot count");
        }
    }

    std::vector<detail::FrameEval> simulate_frame(const PtrsPattern& pattern, const CVec& pilots,
                                                  const std::vector<PreparedEstimator>& prepared,
                                                  SnrPoint snr, Eigen::Index frame_idx, Waveform& wf,
                                                  Fft& fft) const {
        const FrameConfig& cfg = params_.cfg;
        const Eigen::Index na = cfg.n_active;
        const Eigen::Index k = pattern.k();

        std::vector<Eigen::Index> data_pos;
        data_pos.reserve(static_cast<std::size_t>(na - k));
        {
            std::size_t pi = 0;
            for (Eigen::Index i = 0; i < na; ++i) {
                if (pi < pattern.chi_p.size() && pattern.chi_p[pi] == i)
                    ++pi;
                else
                    data_pos.push_back(i);
            }
        }
        const auto n_data = static_cast<Eigen::Index>(data_pos.size());

        const std::uint64_t fseed = derive_seed(params_.seed, 0xF7A3E, static_cast<std::uint64_t>(frame_idx));
        auto bit_rng = make_engine(derive_seed(fseed, 1));
        std::uniform_int_distribution<int> coin(0, 1);

        // transmit frame
        std::vector<BitVec> tx_bits(static_cast<std::size_t>(cfg.n_symbols));
        std::vector<CVec> blocks(static_cast<std::size_t>(cfg.n_symbols));
        for (Eigen::Index s = 0; s < cfg.n_symbols; ++s) {
            BitVec& bits = tx_bits[static_cast<std::size_t>(s)];
            bits.resize(static_cast<std::size_t>(n_data * cfg.mod_order));
            for (auto& b : bits)
                b = static_cast<std::uint8_t>(coin(bit_rng));
            const CVec data = qam_map(bits, cfg.mod_order);
            CVec block(na);
            for (Eigen::Index i = 0; i < n_data; ++i)
                block[data_pos[static_cast<std::size_t>(i)]] = data[i];
            for (Eigen::Index i = 0; i < k; ++i)
                block[pattern.chi_p[static_cast<std::size_t>(i)]] = pilots[i];
            blocks[static_cast<std::size_t>(s)] = std::move(block);
        }

        TimeSignal tx = wf.modulate(blocks);
        const double tx_gain = std::sqrt(static_cast<double>(cfg.n_fft) / static_cast<double>(na));
        tx.samples *= tx_gain; // unit average transmit power

        PnTrace trace;
        if (params_.pn.enabled())
            trace = params_.pn.trace(cfg.frame_len(), cfg.fs_hz, derive_seed(fseed, 2));

        TimeSignal channel_out = params_.pn.enabled() ? apply_phase_noise(tx, trace) : tx;
        if (!snr.noiseless())
            channel_out.samples +=
                std::sqrt(snr.noise_variance()) * unit_awgn(cfg.frame_len(), derive_seed(fseed, 3));

        std::vector<CVec> received = wf.demodulate(channel_out);
        for (auto& r : received)
            r /= tx_gain;

        std::vector<detail::FrameEval> eval(prepared.size());
        for (Eigen::Index s = 0; s < cfg.n_symbols; ++s) {
            const CVec& r = received[static_cast<std::size_t>(s)];
            const CVec& block = blocks[static_cast<std::size_t>(s)];
            const BitVec& bits = tx_bits[static_cast<std::size_t>(s)];

            RVec phi_true;
            if (params_.pn.enabled()) {
                const RVec phi_seg =
                    trace.samples.segment(s * cfg.symbol_len() + cfg.cp_len, cfg.n_fft);
                phi_true = true_phi_prime(alpha_diagonal(phi_seg, cfg, fft)).phi_prime;
            } else {
                phi_true = RVec::Zero(na);
            }

            const PilotObservation obs = observe_pilots(r, pattern, pilots);
            const bool grouped = pattern.kind == PtrsPattern::Kind::contiguous && pattern.group_size > 1;
            PilotObservation gobs;
            if (grouped)
                gobs = group_averaged_observation(obs, pattern);

            CVec raw_pilots(k);
            for (Eigen::Index i = 0; i < k; ++i)
                raw_pilots[i] = r[pattern.chi_p[static_cast<std::size_t>(i)]];

            for (std::size_t e = 0; e < prepared.size(); ++e) {
                const auto& prep = prepared[e];
                RVec phi_hat;
                switch (prep.spec.kind) {
                case EstimatorSpec::Kind::none:
                    phi_hat = RVec::Zero(na);
                    break;
                case EstimatorSpec::Kind::genie:
                    phi_hat = phi_true;
                    break;
                case EstimatorSpec::Kind::cpee:
                    phi_hat = RVec::Constant(na, cpee_estimate(grouped ? gobs : obs));
                    break;
                case EstimatorSpec::Kind::ci:
                    phi_hat = ci_estimate(grouped ? gobs : obs, na);
                    break;
                case EstimatorSpec::Kind::li:
                    phi_hat = li_estimate(grouped ? gobs : obs, na);
                    break;
                case EstimatorSpec::Kind::dct:
                    phi_hat = dct_estimate(obs, prep.basis, raw_pilots, prep.spec.dct_reference);
                    break;
                case EstimatorSpec::Kind::interp_filter:
                    phi_hat = if_estimate(prep.filter, obs);
                    break;
                }

                const CVec corrected = correct(r, phi_hat);
                CVec data_hat(n_data);
                for (Eigen::Index i = 0; i < n_data; ++i)
                    data_hat[i] = corrected[data_pos[static_cast<std::size_t>(i)]];
                const BitVec bits_hat = qam_demap_hard(data_hat, cfg.mod_order);

                auto& ev = eval[e];
                for (Eigen::Index i = 0; i < n_data; ++i) {
                    bool sym_err = false;
                    for (int b = 0; b < cfg.mod_order; ++b) {
                        const std::size_t bi = static_cast<std::size_t>(i * cfg.mod_order + b);
                        if (bits_hat[bi] != bits[bi]) {
                            ++ev.bit_errors;
                            sym_err = true;
                        }
                    }
                    if (sym_err)
                        ++ev.sym_errors;
                    const Eigen::Index pos = data_pos[static_cast<std::size_t>(i)];
                    ev.mse_sum += std::norm(std::polar(1.0, phi_hat[pos]) - std::polar(1.0, phi_true[pos]));
                    ev.evm_err += std::norm(corrected[pos] - block[pos]);
                    ev.evm_ref += std::norm(block[pos]);
                }
                ev.bits += n_data * cfg.mod_order;
                ev.syms += n_data;
                ev.mse_count += n_data;
            }
        }
        return eval;
    }

    EngineParams params_;
    std::optional<CovarianceSet> cov_;
};

/// Fixed-column CSV serialization of sweep rows; byte-stable across reruns
/// and worker counts for a given config and seed.
inline std::string sweep_to_csv(const SweepResult& result) {
    std::ostringstream os;
    os << "estimator,pattern,l,n_g,n_s,snr_db,ber,ser,phase_mse,evm,"
          "n_bits,n_bit_errors,n_symbols,n_sym_errors,n_frames,seed\n";
    for (const auto& row : result.rows) {
        os << row.estimator << ',' << row.pattern_kind << ',' << row.l << ',' << row.n_g << ','
           << row.n_s << ',' << detail::g17(row.snr_db) << ',' << detail::g17(row.metrics.ber) << ','
           << detail::g17(row.metrics.ser) << ',' << detail::g17(row.metrics.phase_mse) << ','
           << detail::g17(row.metrics.evm) << ',' << row.metrics.n_bits << ','
           << row.metrics.n_bit_errors << ',' << row.metrics.n_symbols << ','
           << row.metrics.n_sym_errors << ',' << row.metrics.n_frames << ',' << row.seed << '\n';
    }
    return os.str();
}

/// Parse a CSV produced by sweep_to_csv (loss-free round trip).
inline SweepResult sweep_from_csv(std::istream& is) {
    SweepResult result;
    std::string line;
    if (!std::getline(is, line))
        throw IoError("sweep CSV: empty stream");
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> tok;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t end = line.find(',', pos);
            tok.push_back(line.substr(pos, end - pos));
            if (end == std::string::npos)
                break;
            pos = end + 1;
        }
        if (tok.size() != 16)
            throw IoError("sweep CSV: malformed row: " + line);
        SweepRow row;
        row.estimator = tok[0];
        row.pattern_kind = tok[1];
        row.l = std::stol(tok[2]);
        row.n_g = std::stol(tok[3]);
        row.n_s = std::stol(tok[4]);
        row.snr_db = std::stod(tok[5]);
        row.metrics.ber = std::stod(tok[6]);
        row.metrics.ser = std::stod(tok[7]);
        row.metrics.phase_mse = std::stod(tok[8]);
        row.metrics.evm = std::stod(tok[9]);
        row.metrics.n_bits = std::stoll(tok[10]);
        row.metrics.n_bit_errors = std::stoll(tok[11]);
        row.metrics.n_symbols = std::stoll(tok[12]);
        row.metrics.n_sym_errors = std::stoll(tok[13]);
        row.metrics.n_frames = std::stoll(tok[14]);
        row.seed = std::stoull(tok[15]);
        result.rows.push_back(std::move(row));
    }
    return result;
}

} // namespace pnsim

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mimoim/channel.hpp"
#include "mimoim/constellation.hpp"
#include "mimoim/index_mapper.hpp"
#include "mimoim/small_matrix.hpp"
#include "mimoim/types.hpp"

namespace mimoim {

enum class Scheme { OfdmIm, Classical };
enum class DetectorKind { MmseLlr, JointMl, ClassicalMmse };

/// Received vector and channel matrix of one subcarrier (n, g) after deinterleaving.
struct SubcarrierModel {
    CVector y;  // length R
    CMatrix h;  // R x T
    unsigned n = 0;
    unsigned g = 0;
};

/// Splits R interleaved receive vectors into G*N per-subcarrier models,
/// ordered subblock-major (index g * N + n).
std::vector<SubcarrierModel> regroup(std::span<const CVector> received, const MimoChannelRealization& channel,
                                     const SubblockParams& params);

/// W = (H^H H + I_T / rho)^{-1} H^H.
CMatrix mmse_filter(const CMatrix& h, double rho, CmCounter& cm);
CMatrix mmse_filter(const CMatrix& h, double rho);

struct ConditionalStats {
    CMatrix gain;            // A = W H
    CMatrix covariance;      // cov(z) for transmit covariance sigma_x^2 I
    std::vector<double> var; // per stream t, with stream t itself conditioned on
};

/**
 * Mean coefficient and variance of each MMSE output conditioned on its own
 * symbol. The remaining streams keep variance sigma_x2, so
 * var(t) = [W H D_t H^H W^H + n0 W W^H]_{t,t} with D_t = sigma_x2 I except
 * for a zero at (t, t).
 */
ConditionalStats conditional_stats(const CMatrix& w, const CMatrix& h, double n0, double sigma_x2, CmCounter& cm);
ConditionalStats conditional_stats(const CMatrix& w, const CMatrix& h, double n0, double sigma_x2);

struct MmseResult {
    CMatrix w;
    CVector z;
    CMatrix gain;
    CMatrix covariance;
    std::vector<double> var;
};

/// Filter, estimate and conditional statistics for one subcarrier.
MmseResult mmse_estimate(const SubcarrierModel& model, double n0, double sigma_x2, CmCounter& cm);

/// MMSE output of one stream on one subcarrier together with its statistics.
struct StreamEstimate {
    cplx estimate;   // x_hat
    cplx gain;       // A_tt
    double variance; // (cov z)_tt
};

/// ln sum_m exp(-|x - a s_m|^2 / var) + |x|^2 / var, evaluated as a log-sum-exp.
double llr(cplx estimate, cplx gain, double variance, const Constellation& constellation);

/// Same value; also writes |x - a s_m|^2 for every m into `metrics`.
double llr(cplx estimate, cplx gain, double variance, const Constellation& constellation, std::span<double> metrics,
           CmCounter& cm);

/// Index decision from LLRs: sums d(c) over each table row, argmax with ties to the lowest c.
struct CombinationChoice {
    std::size_t combination = 0;
    std::vector<double> sums;
};
CombinationChoice select_combination(std::span<const double> llrs, const IndexLookupTable& table);

struct SubblockDecision {
    std::size_t combination = 0;
    std::vector<unsigned> active;  // 0-based, ascending
    std::vector<unsigned> symbols; // constellation index per active subcarrier
    std::vector<double> llrs;      // length N (empty for joint ML)
    std::vector<double> sums;      // length C (empty for joint ML)

    SubblockSymbols symbols_only() const { return {combination, symbols}; }
};

/// LLR computation, index decision and per-symbol ML for one (t, g).
SubblockDecision decide_subblock(std::span<const StreamEstimate> estimates, const IndexLookupTable& table,
                                 const Constellation& constellation, CmCounter& cm);
SubblockDecision decide_subblock(std::span<const StreamEstimate> estimates, const IndexLookupTable& table,
                                 const Constellation& constellation);

/// MMSE + LLR detection of a full frame. Result is [t][g].
std::vector<std::vector<SubblockDecision>> detect_mmse_llr(std::span<const SubcarrierModel> models,
                                                           const IndexLookupTable& table,
                                                           const Constellation& constellation, double n0,
                                                           CmCounter& cm);

inline constexpr std::uint64_t default_ml_budget = 1u << 20;

/// (C M^K)^T, saturating at UINT64_MAX.
std::uint64_t ml_hypothesis_count(const IndexLookupTable& table, const Constellation& constellation, unsigned tx);

/**
 * Exhaustive joint ML over all T-tuples of legal subblocks for the N models
 * of one subblock. Ties go to the lexicographically smallest tuple, where
 * each antenna's hypotheses are ordered by (row, s_1, ..., s_K).
 */
std::vector<SubblockDecision> joint_ml_detect(std::span<const SubcarrierModel> subblock,
                                              const IndexLookupTable& table, const Constellation& constellation,
                                              CmCounter& cm, std::uint64_t budget = default_ml_budget);
std::vector<SubblockDecision> joint_ml_detect(std::span<const SubcarrierModel> subblock,
                                              const IndexLookupTable& table, const Constellation& constellation,
                                              std::uint64_t budget = default_ml_budget);

/// Joint ML over a whole frame, subblock by subblock. Result is [t][g].
std::vector<std::vector<SubblockDecision>> detect_joint_ml(std::span<const SubcarrierModel> models,
                                                           const IndexLookupTable& table,
                                                           const Constellation& constellation, CmCounter& cm,
                                                           std::uint64_t budget = default_ml_budget);

/// ML metric sum_r || y_r - sum_t diag(x_t) h_rt ||^2 for given subblocks x_t (length N each).
double ml_metric(std::span<const SubcarrierModel> subblock, std::span<const CVector> x);

/**
 * Classical V-BLAST MMSE: z = W y with sigma_x^2 = 1, then
 * nearest(z_t, A_tt) per stream. Result is [model][t] symbol indices.
 */
std::vector<std::vector<unsigned>> classical_mimo_ofdm_detect(std::span<const SubcarrierModel> models,
                                                              const Constellation& constellation, double n0,
                                                              CmCounter& cm);

/// Complex multiplications per subcarrier as accounted for each scheme.
std::uint64_t cm_count(unsigned tx, unsigned rx, unsigned order, Scheme scheme);

} // namespace mimoim

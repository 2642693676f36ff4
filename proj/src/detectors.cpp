#include "mimoim/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mimoim/errors.hpp"

namespace mimoim {

std::vector<SubcarrierModel> regroup(std::span<const CVector> received, const MimoChannelRealization& channel,
                                     const SubblockParams& params)
{
    const unsigned rx = channel.rx;
    const unsigned tx = channel.tx;
    if (received.size() != rx)
        throw ArgumentError("regroup: expected one receive vector per receive antenna");
    if (channel.fft_size != params.fft_size)
        throw ArgumentError("regroup: channel FFT size differs from frame size");
    for (const auto& y : received)
        if (y.size() != params.fft_size)
            throw ArgumentError("regroup: receive vector length differs from N_F");

    const unsigned big_g = params.subblocks;
    const unsigned big_n = params.subblock_size;
    std::vector<SubcarrierModel> models;
    models.reserve(params.fft_size);
    for (unsigned g = 0; g < big_g; ++g) {
        for (unsigned n = 0; n < big_n; ++n) {
            // Deinterleaved position g*N + n was sent on subcarrier n*G + g.
            const unsigned pos = n * big_g + g;
            SubcarrierModel m;
            m.n = n;
            m.g = g;
            m.y.resize(rx);
            m.h = CMatrix(rx, tx);
            for (unsigned r = 0; r < rx; ++r) {
                m.y[r] = received[r][pos];
                for (unsigned t = 0; t < tx; ++t)
                    m.h(r, t) = channel.response(r, t)[pos];
            }
            models.push_back(std::move(m));
        }
    }
    return models;
}

namespace {

void check_finite(const CMatrix& m, const char* what)
{
    for (unsigned i = 0; i < m.rows(); ++i)
        for (unsigned j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                throw NumericError(std::string(what) + ": non-finite matrix entry");
}

} // namespace

CMatrix mmse_filter(const CMatrix& h, double rho, CmCounter& cm)
{
    if (!(rho > 0.0) || std::isnan(rho))
        throw NumericError("mmse_filter: rho must be positive");
    check_finite(h, "mmse_filter");
    CMatrix gram = multiply_ah_b(h, h, cm);
    const double reg = std::isinf(rho) ? 0.0 : 1.0 / rho;
    for (unsigned i = 0; i < gram.rows(); ++i)
        gram(i, i) += reg;
    const CMatrix inv = invert_hpd(std::move(gram), cm);
    return multiply_a_bh(inv, h, cm);
}

CMatrix mmse_filter(const CMatrix& h, double rho)
{
    CmCounter cm;
    return mmse_filter(h, rho, cm);
}

ConditionalStats conditional_stats(const CMatrix& w, const CMatrix& h, double n0, double sigma_x2, CmCounter& cm)
{
    if (w.cols() != h.rows() || w.rows() != h.cols())
        throw ArgumentError("conditional_stats: W must be T x R for an R x T channel");
    ConditionalStats s;
    s.gain = multiply(w, h, cm);

    // cov(z) = A (sigma_x^2 I) H^H W^H + n0 W W^H.
    const CMatrix signal = multiply_a_bh(multiply_a_bh(s.gain, h, cm), w, cm);
    const CMatrix noise = multiply_a_bh(w, w, cm);
    const unsigned tx = w.rows();
    s.covariance = CMatrix(tx, tx);
    for (unsigned i = 0; i < tx; ++i)
        for (unsigned j = 0; j < tx; ++j)
            s.covariance(i, j) = sigma_x2 * signal(i, j) + n0 * noise(i, j);

    // Conditioning on stream t removes its own term sigma_x^2 |A_tt|^2.
    s.var.resize(tx);
    for (unsigned t = 0; t < tx; ++t) {
        const double noise_only = n0 * noise(t, t).real();
        const double v = s.covariance(t, t).real() - sigma_x2 * std::norm(s.gain(t, t));
        s.var[t] = std::max(v, noise_only);
    }
    return s;
}

ConditionalStats conditional_stats(const CMatrix& w, const CMatrix& h, double n0, double sigma_x2)
{
    CmCounter cm;
    return conditional_stats(w, h, n0, sigma_x2, cm);
}

MmseResult mmse_estimate(const SubcarrierModel& model, double n0, double sigma_x2, CmCounter& cm)
{
    if (!(n0 > 0.0))
        throw NumericError("mmse_estimate: noise variance must be positive");
    MmseResult r;
    r.w = mmse_filter(model.h, sigma_x2 / n0, cm);
    r.z = multiply(r.w, model.y, cm);
    auto stats = conditional_stats(r.w, model.h, n0, sigma_x2, cm);
    r.gain = std::move(stats.gain);
    r.covariance = std::move(stats.covariance);
    r.var = std::move(stats.var);
    return r;
}

double llr(cplx estimate, cplx gain, double variance, const Constellation& constellation, std::span<double> metrics,
           CmCounter& cm)
{
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw NumericError("llr: variance must be positive and finite");
    const auto& points = constellation.points();
    if (metrics.size() != points.size())
        throw ArgumentError("llr: metrics span must hold M entries");

    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < points.size(); ++m) {
        metrics[m] = std::norm(estimate - cm.mul(gain, points[m]));
        top = std::max(top, -metrics[m] / variance);
    }
    double sum = 0.0;
    for (double d : metrics)
        sum += std::exp(-d / variance - top);
    return top + std::log(sum) + std::norm(estimate) / variance;
}

double llr(cplx estimate, cplx gain, double variance, const Constellation& constellation)
{
    std::vector<double> metrics(constellation.order());
    CmCounter cm;
    return llr(estimate, gain, variance, constellation, metrics, cm);
}

CombinationChoice select_combination(std::span<const double> llrs, const IndexLookupTable& table)
{
    if (llrs.size() != table.params().subblock_size)
        throw ArgumentError("select_combination: expected N LLR values");
    CombinationChoice choice;
    choice.sums.resize(table.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < table.size(); ++c) {
        double d = 0.0;
        for (auto i : table.row(c).indices)
            d += llrs[i];
        choice.sums[c] = d;
        if (d > best) {
            best = d;
            choice.combination = c;
        }
    }
    return choice;
}

SubblockDecision decide_subblock(std::span<const StreamEstimate> estimates, const IndexLookupTable& table,
                                 const Constellation& constellation, CmCounter& cm)
{
    const unsigned big_n = table.params().subblock_size;
    if (estimates.size() != big_n)
        throw ArgumentError("decide_subblock: expected N estimates");
    const unsigned order = constellation.order();

    std::vector<double> metrics(static_cast<std::size_t>(big_n) * order);
    SubblockDecision d;
    d.llrs.resize(big_n);
    for (unsigned n = 0; n < big_n; ++n) {
        const auto& e = estimates[n];
        d.llrs[n] = llr(e.estimate, e.gain, e.variance, constellation,
                        std::span<double>(metrics).subspan(static_cast<std::size_t>(n) * order, order), cm);
    }

    auto choice = select_combination(d.llrs, table);
    d.combination = choice.combination;
    d.sums = std::move(choice.sums);
    d.active = table.row(d.combination).indices;

    // Symbol decisions reuse the distances computed for the LLRs.
    d.symbols.reserve(d.active.size());
    for (auto i : d.active) {
        const double* row = metrics.data() + static_cast<std::size_t>(i) * order;
        d.symbols.push_back(static_cast<unsigned>(std::min_element(row, row + order) - row));
    }
    return d;
}

SubblockDecision decide_subblock(std::span<const StreamEstimate> estimates, const IndexLookupTable& table,
                                 const Constellation& constellation)
{
    CmCounter cm;
    return decide_subblock(estimates, table, constellation, cm);
}

namespace {

void check_frame_models(std::span<const SubcarrierModel> models, const SubblockParams& p)
{
    if (models.size() != p.fft_size)
        throw ArgumentError("detector: expected N_F subcarrier models");
}

} // namespace

std::vector<std::vector<SubblockDecision>> detect_mmse_llr(std::span<const SubcarrierModel> models,
                                                           const IndexLookupTable& table,
                                                           const Constellation& constellation, double n0,
                                                           CmCounter& cm)
{
    const auto& p = table.params();
    check_frame_models(models, p);
    const unsigned tx = models.front().h.cols();
    const double sigma_x2 = p.symbol_power();

    std::vector<std::vector<SubblockDecision>> out(tx, std::vector<SubblockDecision>(p.subblocks));
    std::vector<MmseResult> sub(p.subblock_size);
    std::vector<StreamEstimate> est(p.subblock_size);
    for (unsigned g = 0; g < p.subblocks; ++g) {
        for (unsigned n = 0; n < p.subblock_size; ++n)
            sub[n] = mmse_estimate(models[g * p.subblock_size + n], n0, sigma_x2, cm);
        for (unsigned t = 0; t < tx; ++t) {
            for (unsigned n = 0; n < p.subblock_size; ++n)
                est[n] = {sub[n].z[t], sub[n].gain(t, t), sub[n].var[t]};
            out[t][g] = decide_subblock(est, table, constellation, cm);
        }
    }
    return out;
}

std::uint64_t ml_hypothesis_count(const IndexLookupTable& table, const Constellation& constellation, unsigned tx)
{
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t per = table.size();
    for (unsigned k = 0; k < table.params().active; ++k) {
        if (per > cap / constellation.order())
            return cap;
        per *= constellation.order();
    }
    std::uint64_t total = 1;
    for (unsigned t = 0; t < tx; ++t) {
        if (total > cap / per)
            return cap;
        total *= per;
    }
    return total;
}

namespace {

struct Hypothesis {
    std::size_t combination;
    std::vector<unsigned> symbols;
};

std::vector<Hypothesis> legal_subblocks(const IndexLookupTable& table, const Constellation& constellation)
{
    const unsigned k = table.params().active;
    const unsigned order = constellation.order();
    std::vector<Hypothesis> out;
    for (std::size_t c = 0; c < table.size(); ++c) {
        std::vector<unsigned> s(k, 0);
        while (true) {
            out.push_back({c, s});
            // Odometer with s_1 most significant.
            unsigned i = k;
            while (i > 0 && ++s[i - 1] == order)
                s[--i] = 0;
            if (i == 0)
                break;
        }
    }
    return out;
}

struct MlSearch {
    const CVector& y; // N*R, index n*R + r
    const std::vector<std::vector<CVector>>& contrib; // [t][h] -> N*R
    std::vector<CVector> partial;
    std::vector<std::size_t> current;
    std::vector<std::size_t> best;
    double best_metric = std::numeric_limits<double>::infinity();

    void run(unsigned t)
    {
        const unsigned tx = static_cast<unsigned>(contrib.size());
        const auto& base = t == 0 ? y : partial[t - 1];
        for (std::size_t h = 0; h < contrib[t].size(); ++h) {
            current[t] = h;
            auto& acc = partial[t];
            const auto& c = contrib[t][h];
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] = base[i] - c[i];
            if (t + 1 < tx) {
                run(t + 1);
                continue;
            }
            double metric = 0.0;
            for (const auto& v : acc)
                metric += std::norm(v);
            if (metric < best_metric) {
                best_metric = metric;
                best = current;
            }
        }
    }
};

} // namespace

std::vector<SubblockDecision> joint_ml_detect(std::span<const SubcarrierModel> subblock,
                                              const IndexLookupTable& table, const Constellation& constellation,
                                              CmCounter& cm, std::uint64_t budget)
{
    const auto& p = table.params();
    if (subblock.size() != p.subblock_size)
        throw ArgumentError("joint_ml_detect: expected N subcarrier models");
    const unsigned rx = subblock.front().h.rows();
    const unsigned tx = subblock.front().h.cols();

    const auto count = ml_hypothesis_count(table, constellation, tx);
    if (count > budget) {
        std::ostringstream os;
        os << "joint_ml_detect: " << count << " hypotheses per subblock exceeds the budget of " << budget;
        throw BudgetError(os.str());
    }

    const auto hyps = legal_subblocks(table, constellation);
    const std::size_t len = static_cast<std::size_t>(p.subblock_size) * rx;

    CVector y(len);
    for (unsigned n = 0; n < p.subblock_size; ++n)
        for (unsigned r = 0; r < rx; ++r)
            y[n * rx + r] = subblock[n].y[r];

    // Per-antenna received contribution of each legal subblock.
    std::vector<std::vector<CVector>> contrib(tx, std::vector<CVector>(hyps.size(), CVector(len, 0.0)));
    for (unsigned t = 0; t < tx; ++t)
        for (std::size_t h = 0; h < hyps.size(); ++h) {
            const auto& row = table.row(hyps[h].combination);
            for (unsigned k = 0; k < p.active; ++k) {
                const unsigned n = row.indices[k];
                const cplx s = constellation.point(hyps[h].symbols[k]);
                for (unsigned r = 0; r < rx; ++r)
                    contrib[t][h][n * rx + r] = cm.mul(subblock[n].h(r, t), s);
            }
        }

    MlSearch search{y, contrib, std::vector<CVector>(tx, CVector(len)), std::vector<std::size_t>(tx),
                    std::vector<std::size_t>(tx, 0)};
    search.run(0);

    std::vector<SubblockDecision> out(tx);
    for (unsigned t = 0; t < tx; ++t) {
        const auto& h = hyps[search.best[t]];
        out[t].combination = h.combination;
        out[t].active = table.row(h.combination).indices;
        out[t].symbols = h.symbols;
    }
    return out;
}

std::vector<SubblockDecision> joint_ml_detect(std::span<const SubcarrierModel> subblock,
                                              const IndexLookupTable& table, const Constellation& constellation,
                                              std::uint64_t budget)
{
    CmCounter cm;
    return joint_ml_detect(subblock, table, constellation, cm, budget);
}

std::vector<std::vector<SubblockDecision>> detect_joint_ml(std::span<const SubcarrierModel> models,
                                                           const IndexLookupTable& table,
                                                           const Constellation& constellation, CmCounter& cm,
                                                           std::uint64_t budget)
{
    const auto& p = table.params();
    check_frame_models(models, p);
    const unsigned tx = models.front().h.cols();
    std::vector<std::vector<SubblockDecision>> out(tx, std::vector<SubblockDecision>(p.subblocks));
    for (unsigned g = 0; g < p.subblocks; ++g) {
        auto d = joint_ml_detect(models.subspan(static_cast<std::size_t>(g) * p.subblock_size, p.subblock_size),
                                 table, constellation, cm, budget);
        for (unsigned t = 0; t < tx; ++t)
            out[t][g] = std::move(d[t]);
    }
    return out;
}

double ml_metric(std::span<const SubcarrierModel> subblock, std::span<const CVector> x)
{
    double metric = 0.0;
    for (std::size_t n = 0; n < subblock.size(); ++n) {
        const auto& m = subblock[n];
        if (x.size() != m.h.cols())
            throw ArgumentError("ml_metric: need one subblock per transmit antenna");
        for (unsigned r = 0; r < m.h.rows(); ++r) {
            cplx e = m.y[r];
            for (unsigned t = 0; t < m.h.cols(); ++t)
                e -= m.h(r, t) * x[t].at(n);
            metric += std::norm(e);
        }
    }
    return metric;
}

std::vector<std::vector<unsigned>> classical_mimo_ofdm_detect(std::span<const SubcarrierModel> models,
                                                              const Constellation& constellation, double n0,
                                                              CmCounter& cm)
{
    if (!(n0 > 0.0))
        throw NumericError("classical_mimo_ofdm_detect: noise variance must be positive");
    std::vector<std::vector<unsigned>> out;
    out.reserve(models.size());
    std::vector<double> metrics(constellation.order());
    for (const auto& m : models) {
        const CMatrix w = mmse_filter(m.h, 1.0 / n0, cm);
        const CVector z = multiply(w, m.y, cm);
        const unsigned tx = w.rows();
        std::vector<unsigned> sym(tx);
        for (unsigned t = 0; t < tx; ++t) {
            // A_tt: row t of W against column t of H.
            cplx a = 0.0;
            for (unsigned r = 0; r < w.cols(); ++r)
                a += cm.mul(w(t, r), m.h(r, t));
            unsigned best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (unsigned s = 0; s < constellation.order(); ++s) {
                const double d = std::norm(z[t] - cm.mul(a, constellation.point(s)));
                if (d < best_d) {
                    best_d = d;
                    best = s;
                }
            }
            sym[t] = best;
        }
        out.push_back(std::move(sym));
    }
    return out;
}

std::uint64_t cm_count(unsigned tx, unsigned rx, unsigned order, Scheme scheme)
{
    const std::uint64_t t = tx, r = rx, m = order;
    if (scheme == Scheme::OfdmIm)
        return 2 * t * t * t + 5 * t * t * r + t * (r + m + 1);
    return t * t * t + 2 * t * t * r + t * (r + m);
}

} // namespace mimoim

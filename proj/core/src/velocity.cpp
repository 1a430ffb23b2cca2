// SPDX-License-Identifier: Apache-2.0
//
// nlosia: NLOS radar imaging embedded in a base-station beam sweep
// Copyright (C) 2026 The nlosia authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nlosia/velocity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <memory>

namespace nlosia
{

std::vector<CoarseDetection> coarse_positions(const SingleBeamStack &stack, const CoarseOptions &options)
{
    const auto &g = stack.grid;
    if (g.kind != GridKind::Polar)
        throw Error("coarse position: polar grid required");
    // Incoherent detection statistic, each beam weighted by its illumination.
    ImageGrid stat;
    stat.grid = g;
    stat.values.assign(g.size(), Complex{0.0, 0.0});
    for (std::size_t p = 0; p < g.size(); ++p)
    {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < stack.images.size(); ++k)
        {
            const double h2 = stack.illumination[k][p] * stack.illumination[k][p];
            num += std::abs(stack.images[k].values[p]) * h2;
            den += h2;
        }
        stat.values[p] = den > 0.0 ? num / std::sqrt(den) : 0.0;
    }
    std::vector<double> mags(g.size());
    for (std::size_t p = 0; p < g.size(); ++p)
        mags[p] = std::abs(stat.values[p]);
    auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    const double median = *mid;
    const double threshold = median * std::pow(10.0, options.detection_threshold_db / 20.0);

    std::vector<CoarseDetection> out;
    for (const auto &peak : local_maxima(stat))
    {
        if (out.size() >= options.max_targets || !(peak.magnitude > threshold))
            break;
        CoarseDetection d;
        d.position = {peak.axis1, peak.axis2};
        d.level_db = median > 0.0 ? to_db20(peak.magnitude / median) : std::numeric_limits<double>::infinity();
        out.push_back(d);
    }
    if (out.empty())
        throw Error("target not detectable pre-stack");
    return out;
}

PolarPoint coarse_position(const SingleBeamStack &stack, const CoarseOptions &options)
{
    CoarseOptions one = options;
    one.max_targets = 1;
    return coarse_positions(stack, one).front().position;
}

PhaseTrack extract_phase_track(std::span<const Complex> samples, std::span<const int> slots,
                               std::span<const double> snr_per_beam, std::span<const bool> effective_mask)
{
    const std::size_t n = samples.size();
    if (slots.size() != n || snr_per_beam.size() != n || effective_mask.size() != n)
        throw Error("phase track: input lengths differ");
    PhaseTrack t;
    t.effective_mask.assign(effective_mask.begin(), effective_mask.end());
    double prev_wrapped = 0.0, prev = 0.0;
    bool first = true;
    for (std::size_t b = 0; b < n; ++b)
    {
        if (!effective_mask[b])
            continue;
        if (!(snr_per_beam[b] > 0.0))
            throw Error("phase track: per-beam SNR must be positive");
        // Propagation phase is the negated image phase.
        const double wrapped = -std::arg(samples[b]);
        double phase = wrapped;
        if (!first)
        {
            const double step = wrap_pi(wrapped - prev_wrapped);
            if (std::abs(step) > 0.8 * kPi)
                t.unwrap_failure = true;
            phase = prev + step;
        }
        first = false;
        prev_wrapped = wrapped;
        prev = phase;
        t.beam_indices.push_back(slots[b]);
        t.unwrapped_phase.push_back(phase);
        t.weights.push_back(1.0 / (2.0 * snr_per_beam[b]));
    }
    return t;
}

VelocityEstimate fit_velocity(const PhaseTrack &track, PolarPoint anchor, double v_sweep, const OfdmConfig &cfg)
{
    const int n = static_cast<int>(track.unwrapped_phase.size());
    if (n < 3)
        throw Error("velocity fit: at least three effective samples are required");
    if (!(v_sweep != 0.0))
        throw Error("velocity fit: sweep velocity must be non-zero");
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd phi(n), w(n);
    for (int i = 0; i < n; ++i)
    {
        const double l = track.beam_indices[i];
        design(i, 0) = 1.0;
        design(i, 1) = l;
        design(i, 2) = l * l;
        phi(i) = track.unwrapped_phase[i];
        if (!(track.weights[i] > 0.0))
            throw Error("velocity fit: sample variances must be positive");
        w(i) = 1.0 / track.weights[i];
    }
    const Eigen::Matrix3d normal = design.transpose() * w.asDiagonal() * design;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(normal);
    if (lu.rank() < 3)
        throw Error("velocity fit: singular normal matrix");
    const Eigen::Matrix3d inv = lu.inverse();
    const Eigen::Vector3d a = inv * (design.transpose() * w.asDiagonal() * phi);
    const Eigen::VectorXd res = phi - design * a;
    const double chi2 = res.dot(w.asDiagonal() * res);

    const double lambda = cfg.wavelength();
    const double t_slot = cfg.slot_duration();
    const double c1 = lambda / (4.0 * kPi * t_slot);
    const double c2 = lambda * anchor.radius / (4.0 * kPi * t_slot * t_slot * v_sweep * std::cos(anchor.angle));
    auto to_velocity = [&](const Eigen::Matrix3d &m, double scale) {
        Matrix2 out;
        out.xx = c1 * c1 * m(1, 1) * scale;
        out.xy = out.yx = c1 * c2 * m(1, 2) * scale;
        out.yy = c2 * c2 * m(2, 2) * scale;
        return out;
    };
    VelocityEstimate e;
    e.a0 = a(0);
    e.a1 = a(1);
    e.a2 = a(2);
    e.v_radial = c1 * a(1);
    e.v_transverse = c2 * a(2);
    e.anchor = anchor;
    e.residual = chi2;
    e.samples = n;
    e.unwrap_failure = track.unwrap_failure;
    e.crb = to_velocity(inv, 1.0);
    e.covariance = to_velocity(inv, n > 3 ? chi2 / (n - 3) : 1.0);
    return e;
}

PhaseTrack track_at(const BackProjector &projector, PolarPoint anchor)
{
    const auto &sys = projector.system();
    const Vec2 x = anchor.to_cartesian();
    std::vector<Complex> values;
    std::vector<double> illum;
    projector.beam_values(x, values, &illum);
    const auto mask = effective_beam_mask(sys, anchor, projector.options().gain_floor_db);
    const int l_count = sys.beam_count();

    // Longest contiguous run of usable effective beams.
    int best_start = 0, best_len = 0;
    for (int b = 0; b < l_count;)
    {
        if (!(mask[b] && illum[b] > 0.0))
        {
            ++b;
            continue;
        }
        int e = b;
        while (e < l_count && mask[e] && illum[e] > 0.0)
            ++e;
        if (e - b > best_len)
        {
            best_start = b;
            best_len = e - b;
        }
        b = e;
    }
    std::vector<bool> run(l_count, false);
    for (int b = best_start; b < best_start + best_len; ++b)
        run[b] = true;

    // Per-beam SNR from the mean sample power over the run.
    const double q_count = sys.ofdm().subcarrier_count;
    const double noise = projector.echoes().noise_power;
    double power = 0.0;
    for (int b = best_start; b < best_start + best_len; ++b)
        power += std::norm(values[b]);
    power = best_len > 0 ? power / best_len : 0.0;
    std::vector<double> snr(l_count, 1.0);
    std::vector<int> slots(l_count);
    for (int b = 0; b < l_count; ++b)
    {
        slots[b] = sys.slot(b);
        if (run[b] && noise > 0.0 && power > 0.0)
            snr[b] = power * q_count * illum[b] * illum[b] / noise;
    }
    std::unique_ptr<bool[]> run_flags(new bool[l_count]);
    for (int b = 0; b < l_count; ++b)
        run_flags[b] = run[b];
    return extract_phase_track(values, slots, snr, std::span<const bool>(run_flags.get(), l_count));
}

VelocityEstimate estimate_velocity(const BackProjector &projector, PolarPoint anchor)
{
    const auto &sys = projector.system();
    const double v_sweep = sweep_velocity(sys.codebook(), sys.geometry(), sys.ofdm().slot_duration());
    return fit_velocity(track_at(projector, anchor), anchor, v_sweep, sys.ofdm());
}

namespace
{

// Small polar window around the anchor at a third of the nominal resolution.
GridSpec refine_window(const SensingSystem &sys, PolarPoint anchor)
{
    const auto &cfg = sys.ofdm();
    const double rho_r = kSpeedOfLight / (2.0 * cfg.bandwidth());
    const EffectiveAperture ea = effective_aperture_discrete(sys.design(), anchor);
    const double a = ea.length > 0.0 ? ea.length : sys.design().length();
    const double rho_psi = cfg.wavelength() / (2.0 * a * std::max(std::cos(anchor.angle), 1e-3));
    return GridSpec::polar(anchor.radius, 2.0 * rho_r, rho_r / 3.0, anchor.angle, 2.0 * rho_psi, rho_psi / 3.0);
}

} // namespace

RefineResult iterate_refine(const BackProjector &projector, const VelocityEstimate &initial, int rounds)
{
    if (rounds < 1)
        throw Error("refine: rounds must be at least 1");
    RefineResult r;
    r.history.push_back(initial);
    std::size_t best = 0;
    int growth = 0;
    for (int round = 2; round <= rounds; ++round)
    {
        const VelocityEstimate &cur = r.history.back();
        const Vec2 xi = polar_velocity(cur.anchor.angle, cur.v_radial, cur.v_transverse);
        const ImageGrid img = projector.image(refine_window(projector.system(), cur.anchor), xi);
        const PeakLocation peak = find_peak(img);
        VelocityEstimate next = estimate_velocity(projector, {peak.axis1, peak.axis2});
        growth = next.residual > cur.residual ? growth + 1 : 0;
        r.history.push_back(next);
        if (next.residual < r.history[best].residual)
            best = r.history.size() - 1;
        if (growth >= 2)
        {
            r.diverged = true;
            r.estimate = r.history[best];
            return r;
        }
    }
    r.estimate = r.history.back();
    return r;
}

} // namespace nlosia

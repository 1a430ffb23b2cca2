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

#include "nlosia/imaging.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <fftw3.h>
#include <limits>
#include <mutex>

namespace nlosia
{

namespace
{

std::mutex fftw_planner_mutex;

// Four-point Lagrange interpolation on a periodic sequence.
Complex cubic_periodic(const std::vector<Complex> &p, double pos)
{
    const long n = static_cast<long>(p.size());
    const double fl = std::floor(pos);
    const double t = pos - fl;
    long i = static_cast<long>(fl) % n;
    if (i < 0)
        i += n;
    auto at = [&](long k) { return p[static_cast<std::size_t>(((i + k) % n + n) % n)]; };
    const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return w0 * at(-1) + w1 * at(0) + w2 * at(1) + w3 * at(2);
}

int next_pow2(int n)
{
    int p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

} // namespace

Vec2 GridSpec::pixel(int i, int j) const
{
    if (kind == GridKind::Polar)
        return PolarPoint{axis1.at(i), axis2.at(j)}.to_cartesian();
    return {axis1.at(i), axis2.at(j)};
}

Axis GridSpec::centered_axis(double center, double half, double step)
{
    if (!(step > 0.0))
        throw Error("grid: axis spacing must be positive");
    const int n_half = static_cast<int>(std::ceil(half / step - 1e-9));
    return {center - n_half * step, step, 2 * n_half + 1};
}

GridSpec GridSpec::polar(double r_center, double r_half, double dr, double psi_center, double psi_half, double dpsi)
{
    GridSpec g;
    g.kind = GridKind::Polar;
    g.axis1 = centered_axis(r_center, r_half, dr);
    g.axis2 = centered_axis(psi_center, psi_half, dpsi);
    return g;
}

GridSpec roi_polar_grid(const SceneGeometry &geom, double dr, double dpsi)
{
    const Vec2 lo = geom.roi.lower(), hi = geom.roi.upper();
    const std::array<Vec2, 4> corners{Vec2{lo.x, lo.y}, Vec2{hi.x, lo.y}, Vec2{lo.x, hi.y}, Vec2{hi.x, hi.y}};
    const Vec2 nearest{std::clamp(0.0, lo.x, hi.x), lo.y};
    double r_min = nearest.norm(), r_max = 0.0, a_min = 1e300, a_max = -1e300;
    for (const Vec2 &c : corners)
    {
        r_max = std::max(r_max, c.norm());
        a_min = std::min(a_min, std::atan2(c.x, c.y));
        a_max = std::max(a_max, std::atan2(c.x, c.y));
    }
    return GridSpec::polar(0.5 * (r_min + r_max), 0.5 * (r_max - r_min), dr, 0.5 * (a_min + a_max),
                           0.5 * (a_max - a_min), dpsi);
}

const char *to_string(BeamWeighting weighting)
{
    return weighting == BeamWeighting::Matched ? "matched" : "inverse";
}

BeamWeighting parse_beam_weighting(const std::string &name)
{
    if (name == "inverse")
        return BeamWeighting::Inverse;
    if (name == "matched")
        return BeamWeighting::Matched;
    throw Error("beam weighting: unknown value '" + name + "' (expected inverse or matched)");
}

BackProjector::BackProjector(const SensingSystem &system, const EchoTensor &echoes, BackprojectOptions options)
    : system_(&system), echoes_(&echoes), options_(options)
{
    const int q_count = echoes.subcarrier_count;
    if (echoes.beam_count != system.beam_count() || q_count != system.ofdm().subcarrier_count)
        throw Error("backproject: echo tensor does not match the sensing system");
    if (options_.range_oversample < 1)
        throw Error("backproject: range oversampling must be at least 1");
    const auto &cfg = system.ofdm();
    profiles_.resize(echoes.beam_count);
    if (options_.exact_range_sum)
    {
        for (int b = 0; b < echoes.beam_count; ++b)
        {
            const auto pilots = pilot_block(echoes.seed, system.slot(b), q_count);
            auto &z = profiles_[b];
            z.resize(q_count);
            for (int q = 0; q < q_count; ++q)
                z[q] = echoes.at(q, b) * std::conj(pilots[q]);
        }
        return;
    }
    fft_size_ = next_pow2(q_count * options_.range_oversample);
    fftw_complex *buf = fftw_alloc_complex(static_cast<std::size_t>(fft_size_));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex);
        plan = fftw_plan_dft_1d(fft_size_, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    for (int b = 0; b < echoes.beam_count; ++b)
    {
        if (system.beam(b).empty())
            continue;
        std::fill_n(reinterpret_cast<double *>(buf), 2 * static_cast<std::size_t>(fft_size_), 0.0);
        const auto pilots = pilot_block(echoes.seed, system.slot(b), q_count);
        for (int q = 0; q < q_count; ++q)
        {
            const Complex z = echoes.at(q, b) * std::conj(pilots[q]);
            const int k = cfg.subcarrier_index(q);
            const int idx = ((k % fft_size_) + fft_size_) % fft_size_;
            buf[idx][0] = z.real();
            buf[idx][1] = z.imag();
        }
        fftw_execute(plan);
        auto &p = profiles_[b];
        p.resize(fft_size_);
        for (int n = 0; n < fft_size_; ++n)
            p[n] = {buf[n][0], buf[n][1]};
    }
    {
        std::lock_guard lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
}

Complex BackProjector::range_profile(int b, double tau) const
{
    const auto &cfg = system_->ofdm();
    const auto &p = profiles_[b];
    if (options_.exact_range_sum)
    {
        Complex s{0.0, 0.0};
        const int q_count = static_cast<int>(p.size());
        const Complex step = std::polar(1.0, kTwoPi * cfg.subcarrier_spacing() * tau);
        for (int q0 = 0; q0 < q_count; q0 += 64)
        {
            // Exact phasor every 64 subcarriers, recurrence in between.
            Complex rot = std::polar(1.0, kTwoPi * cfg.subcarrier_offset(q0) * tau);
            const int q1 = std::min(q_count, q0 + 64);
            for (int q = q0; q < q1; ++q)
            {
                s += p[q] * rot;
                rot *= step;
            }
        }
        return s;
    }
    return cubic_periodic(p, tau * fft_size_ * cfg.subcarrier_spacing());
}

void BackProjector::beam_values(Vec2 x, std::vector<Complex> &values, std::vector<double> *illumination) const
{
    evaluate(x, values, illumination, nullptr);
}

void BackProjector::evaluate(Vec2 x, std::vector<Complex> &values, std::vector<double> *illumination,
                             std::vector<double> *weights) const
{
    const auto &sys = *system_;
    const auto &cfg = sys.ofdm();
    const int l_count = sys.beam_count();
    values.assign(l_count, Complex{0.0, 0.0});
    if (illumination)
        illumination->assign(l_count, 0.0);
    if (weights)
        weights->assign(l_count, 0.0);
    thread_local std::vector<Complex> gains;
    gains.resize(l_count);
    double g_max = 0.0;
    for (int b = 0; b < l_count; ++b)
    {
        gains[b] = sys.beam(b).gain(x);
        g_max = std::max(g_max, std::abs(gains[b]));
    }
    if (g_max <= 0.0)
        return;
    const double floor = g_max * std::pow(10.0, options_.gain_floor_db / 20.0);
    const double sqrt_p = std::sqrt(cfg.tx_power);
    const double q_count = cfg.subcarrier_count;
    for (int b = 0; b < l_count; ++b)
    {
        if (std::abs(gains[b]) < floor || gains[b] == Complex{0.0, 0.0})
            continue;
        const auto &beam = sys.beam(b);
        const double d_o = (x - sys.incidence_point_xy(b)).norm();
        const double tau = 2.0 * (beam.incidence_distance() + d_o) / kSpeedOfLight;
        const Complex amp = sqrt_p * sys.subcarrier_beta(beam.incidence_distance(), d_o) * gains[b];
        values[b] = range_profile(b, tau) * std::polar(1.0, kTwoPi * cfg.carrier_frequency * tau) / (q_count * amp);
        if (illumination)
            (*illumination)[b] = std::abs(amp);
        if (weights)
        {
            const double m2 = static_cast<double>(beam.atom_count()) * beam.atom_count();
            (*weights)[b] = std::norm(gains[b]) / (m2 * m2);
        }
    }
}

double BackProjector::beam_noise_variance(int b, Vec2 x) const
{
    std::vector<Complex> values;
    std::vector<double> illum;
    beam_values(x, values, &illum);
    if (illum[b] <= 0.0)
        return std::numeric_limits<double>::infinity();
    return echoes_->noise_power / (system_->ofdm().subcarrier_count * illum[b] * illum[b]);
}

double BackProjector::doppler_phase(int b, Vec2 x, Vec2 xi) const
{
    const auto &sys = *system_;
    const double nu = doppler_exact(xi, x, sys.beam(b).incidence_x(), sys.ofdm().wavelength());
    return -kTwoPi * nu * sys.slot_time(b);
}

Complex BackProjector::pixel(Vec2 x, Vec2 xi, bool *skipped) const
{
    thread_local std::vector<Complex> values;
    thread_local std::vector<double> weights;
    const bool matched = options_.weighting == BeamWeighting::Matched;
    evaluate(x, values, nullptr, matched ? &weights : nullptr);
    const bool moving = xi.x != 0.0 || xi.y != 0.0;
    Complex sum{0.0, 0.0};
    bool any = false;
    for (int b = 0; b < static_cast<int>(values.size()); ++b)
    {
        if (values[b] == Complex{0.0, 0.0})
            continue;
        any = true;
        Complex v = matched ? values[b] * weights[b] : values[b];
        sum += moving ? v * std::polar(1.0, doppler_phase(b, x, xi)) : v;
    }
    if (skipped)
        *skipped = !any;
    return sum;
}

ImageGrid BackProjector::image(const GridSpec &grid, Vec2 xi) const
{
    ImageGrid img;
    img.grid = grid;
    img.hypothesis_velocity = xi;
    img.values.assign(grid.size(), Complex{0.0, 0.0});
    img.skipped.assign(grid.size(), 0);
    detail::parallel_for(grid.axis1.count, options_.threads, [&](int i0, int i1) {
        for (int i = i0; i < i1; ++i)
            for (int j = 0; j < grid.axis2.count; ++j)
            {
                bool skipped = false;
                img.values[grid.index(i, j)] = pixel(grid.pixel(i, j), xi, &skipped);
                img.skipped[grid.index(i, j)] = skipped ? 1 : 0;
            }
    });
    return img;
}

SingleBeamStack BackProjector::single_beam_images(const GridSpec &grid) const
{
    SingleBeamStack stack;
    stack.grid = grid;
    for (int b = 0; b < system_->beam_count(); ++b)
        if (!system_->beam(b).empty())
            stack.beams.push_back(b);
    const std::size_t n_beams = stack.beams.size();
    stack.images.resize(n_beams);
    stack.illumination.assign(n_beams, std::vector<double>(grid.size(), 0.0));
    for (auto &img : stack.images)
    {
        img.grid = grid;
        img.values.assign(grid.size(), Complex{0.0, 0.0});
        img.skipped.assign(grid.size(), 0);
    }
    detail::parallel_for(grid.axis1.count, options_.threads, [&](int i0, int i1) {
        std::vector<Complex> values;
        std::vector<double> illum;
        for (int i = i0; i < i1; ++i)
            for (int j = 0; j < grid.axis2.count; ++j)
            {
                const std::size_t idx = grid.index(i, j);
                beam_values(grid.pixel(i, j), values, &illum);
                for (std::size_t k = 0; k < n_beams; ++k)
                {
                    const int b = stack.beams[k];
                    stack.images[k].values[idx] = values[b];
                    stack.images[k].skipped[idx] = illum[b] > 0.0 ? 0 : 1;
                    stack.illumination[k][idx] = illum[b];
                }
            }
    });
    return stack;
}

ImageGrid backproject(const SensingSystem &system, const EchoTensor &echoes, const GridSpec &grid, Vec2 xi,
                      const BackprojectOptions &options)
{
    return BackProjector(system, echoes, options).image(grid, xi);
}

ImageGrid saf(const SensingSystem &system, PolarPoint target, const GridSpec &grid, const BackprojectOptions &options)
{
    TargetState t;
    t.position = target;
    t.rcs = 1.0;
    const std::array<TargetState, 1> scene{t};
    SynthesisOptions so;
    so.noise = false;
    const EchoTensor echoes = synthesize(system, scene, 0, so);
    const BackProjector bp(system, echoes, options);
    ImageGrid img = bp.image(grid, {0.0, 0.0});
    const Complex ref = bp.pixel(target.to_cartesian(), {0.0, 0.0});
    if (ref == Complex{0.0, 0.0})
        throw Error("saf: target is not illuminated by any beam");
    for (auto &v : img.values)
        v /= ref;
    return img;
}

namespace
{

double parabolic_offset(double m_minus, double m0, double m_plus)
{
    const double den = m_minus - 2.0 * m0 + m_plus;
    if (den >= 0.0)
        return 0.0;
    return std::clamp(0.5 * (m_minus - m_plus) / den, -0.5, 0.5);
}

PeakLocation refine(const ImageGrid &image, int i, int j)
{
    const auto &g = image.grid;
    PeakLocation p;
    p.i = i;
    p.j = j;
    p.magnitude = image.magnitude(i, j);
    p.on_boundary = i == 0 || j == 0 || i == g.axis1.count - 1 || j == g.axis2.count - 1;
    double di = 0.0, dj = 0.0;
    if (i > 0 && i < g.axis1.count - 1)
        di = parabolic_offset(image.magnitude(i - 1, j), p.magnitude, image.magnitude(i + 1, j));
    if (j > 0 && j < g.axis2.count - 1)
        dj = parabolic_offset(image.magnitude(i, j - 1), p.magnitude, image.magnitude(i, j + 1));
    p.axis1 = g.axis1.at(i) + di * g.axis1.step;
    p.axis2 = g.axis2.at(j) + dj * g.axis2.step;
    return p;
}

} // namespace

PeakLocation find_peak(const ImageGrid &image)
{
    if (image.values.empty())
        throw Error("peak: empty image");
    std::size_t best = 0;
    for (std::size_t k = 1; k < image.values.size(); ++k)
        if (std::abs(image.values[k]) > std::abs(image.values[best]))
            best = k;
    const int n2 = image.grid.axis2.count;
    return refine(image, static_cast<int>(best / n2), static_cast<int>(best % n2));
}

std::vector<PeakLocation> local_maxima(const ImageGrid &image)
{
    const auto &g = image.grid;
    std::vector<PeakLocation> out;
    for (int i = 0; i < g.axis1.count; ++i)
        for (int j = 0; j < g.axis2.count; ++j)
        {
            const double m = image.magnitude(i, j);
            if (m <= 0.0)
                continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                {
                    if (di == 0 && dj == 0)
                        continue;
                    const int a = i + di, b = j + dj;
                    if (a < 0 || b < 0 || a >= g.axis1.count || b >= g.axis2.count)
                        continue;
                    const double n = image.magnitude(a, b);
                    // Ties broken toward the lower index so plateaus yield one maximum.
                    if (n > m || (n == m && (a < i || (a == i && b < j))))
                    {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                out.push_back(refine(image, i, j));
        }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.magnitude > b.magnitude; });
    return out;
}

std::vector<bool> effective_beam_mask(const SensingSystem &system, PolarPoint target, double gain_floor_db)
{
    const EffectiveAperture ea = effective_aperture_discrete(system.design(), target);
    std::vector<bool> mask(system.beam_count(), false);
    bool any = false;
    if (!ea.module_set.empty())
        for (int b = 0; b < system.beam_count(); ++b)
        {
            const double x = system.beam(b).incidence_x();
            mask[b] = !system.beam(b).empty() && x >= ea.lo && x <= ea.hi;
            any = any || mask[b];
        }
    if (any)
        return mask;
    const Vec2 r = target.to_cartesian();
    std::vector<double> g(system.beam_count());
    double g_max = 0.0;
    for (int b = 0; b < system.beam_count(); ++b)
        g_max = std::max(g_max, g[b] = std::abs(system.beam(b).gain(r)));
    const double floor = g_max * std::pow(10.0, gain_floor_db / 20.0);
    for (int b = 0; b < system.beam_count(); ++b)
        mask[b] = g[b] > 0.0 && g[b] >= floor;
    return mask;
}

double sweep_velocity(const Codebook &codebook, const SceneGeometry &geom, double slot_duration)
{
    std::vector<double> xs;
    const bool has_imaging = codebook.count(BeamKind::Imaging) > 0;
    for (const auto &e : codebook.entries)
        if (!has_imaging || e.kind == BeamKind::Imaging)
            xs.push_back(incidence_point(e.angle, geom));
    if (xs.size() < 2)
        throw Error("sweep velocity: at least two imaging beams are required");
    return (xs.back() - xs.front()) / (static_cast<double>(xs.size() - 1) * slot_duration);
}

MovingImagePrediction predict_moving_image(const SensingSystem &system, const TargetState &target,
                                           const GridSpec &grid, bool far_field)
{
    if (grid.kind != GridKind::Polar)
        throw Error("moving-image prediction: polar grid required");
    const auto &cfg = system.ofdm();
    const double lambda = cfg.wavelength();
    const double t_slot = cfg.slot_duration();
    const double rho_r = kSpeedOfLight / (2.0 * cfg.bandwidth());
    const double v_sweep = sweep_velocity(system.codebook(), system.geometry(), t_slot);
    const auto mask = effective_beam_mask(system, target.position);
    MovingImagePrediction pred;
    pred.effective_beams = static_cast<int>(std::count(mask.begin(), mask.end(), true));
    const double speed = std::hypot(target.velocity_radial, target.velocity_transverse);
    pred.migration_warning = speed * system.beam_count() * t_slot > 0.25 * rho_r;

    const double r0 = target.position.radius, psi0 = target.position.angle;
    if (speed == 0.0)
    {
        pred.peak = target.position;
        return pred;
    }
    if (far_field)
    {
        const double s = std::sin(psi0) - target.velocity_radial / v_sweep;
        pred.peak = {r0, std::asin(std::clamp(s, -1.0, 1.0))};
        pred.defocus = 1.0;
        return pred;
    }
    const double k2 = 4.0 * kPi / lambda;
    auto beam_sum = [&](double r, double psi, double v_r, double v_t) {
        Complex s{0.0, 0.0};
        for (int b = 0; b < system.beam_count(); ++b)
        {
            if (!mask[b])
                continue;
            const double x = system.beam(b).incidence_x();
            const double t = system.slot_time(b);
            const double geom_phase = parabolic_outgoing_distance(x, {r, psi}) - parabolic_outgoing_distance(x, {r0, psi0});
            const double doppler = (v_r + v_t * std::cos(psi0) * x / r0) * t;
            s += std::polar(1.0, k2 * (geom_phase - doppler));
        }
        return s * sinc((r - r0) / rho_r);
    };
    ImageGrid img;
    img.grid = grid;
    img.values.resize(grid.size());
    for (int i = 0; i < grid.axis1.count; ++i)
        for (int j = 0; j < grid.axis2.count; ++j)
            img.values[grid.index(i, j)] =
                beam_sum(grid.axis1.at(i), grid.axis2.at(j), target.velocity_radial, target.velocity_transverse);
    const PeakLocation peak = find_peak(img);
    pred.peak = {peak.axis1, peak.axis2};
    const double ref = std::abs(beam_sum(r0, psi0, 0.0, 0.0));
    const double at_peak =
        std::abs(beam_sum(peak.axis1, peak.axis2, target.velocity_radial, target.velocity_transverse));
    pred.defocus = ref > 0.0 ? std::min(1.0, at_peak / ref) : 0.0;
    return pred;
}

} // namespace nlosia

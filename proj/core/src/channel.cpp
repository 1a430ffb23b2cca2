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

#include "nlosia/channel.hpp"

#include <array>
#include <algorithm>
#include <limits>
#include <random>

namespace nlosia
{

namespace
{

constexpr std::uint32_t kPilotStream = 0x50494c54u;
constexpr std::uint32_t kNoiseStream = 0x4e4f4953u;
constexpr std::uint32_t kScatterStream = 0x53434154u;

std::mt19937_64 keyed_engine(std::uint64_t seed, int slot, std::uint32_t stream, std::uint32_t extra = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(slot), stream, extra};
    return std::mt19937_64(seq);
}

} // namespace

SensingSystem::SensingSystem(SceneGeometry geometry, OfdmConfig ofdm, BsArray array, ReflectorDesign design,
                             Codebook codebook)
    : geometry_(geometry), ofdm_(ofdm), array_(array), design_(std::move(design)), codebook_(std::move(codebook))
{
    geometry_.validate();
    ofdm_.validate();
    array_.validate();
    const double lambda = ofdm_.wavelength();
    footprints_.reserve(codebook_.size());
    beams_.reserve(codebook_.size());
    for (const auto &e : codebook_.entries)
    {
        footprints_.push_back(beam_footprint(e.angle, array_, geometry_, lambda));
        beams_.emplace_back(design_, geometry_, e.angle, footprints_.back());
    }
}

double SensingSystem::subcarrier_beta(double d_i, double d_o) const
{
    return beta(d_i, d_o, ofdm_, array_) / std::sqrt(static_cast<double>(ofdm_.subcarrier_count));
}

double beta(double d_i, double d_o, const OfdmConfig &cfg, const BsArray &array)
{
    if (!(d_i > 0.0 && d_o > 0.0))
        throw Error("beta: propagation distances must be positive");
    const double lambda = cfg.wavelength();
    const double k = array.element_count;
    const double num = cfg.bandwidth() * cfg.pilot_duration * std::pow(lambda, 6) * k * k * k * k;
    const double den = std::pow(4.0 * kPi, 7) * std::pow(d_i, 4) * std::pow(d_o, 4);
    return std::sqrt(num / den);
}

double snr_per_beam(double gain_magnitude, double rcs, double d_i, double d_o, const OfdmConfig &cfg,
                    const BsArray &array)
{
    const double b = beta(d_i, d_o, cfg, array);
    const double k = array.element_count;
    return cfg.tx_power * b * b * rcs * gain_magnitude * gain_magnitude / (k * cfg.noise_variance());
}

std::vector<double> per_beam_snr(const SensingSystem &system, const TargetState &target)
{
    const Vec2 r = target.position_xy();
    std::vector<double> out(system.beam_count(), 0.0);
    for (int b = 0; b < system.beam_count(); ++b)
    {
        const auto &beam = system.beam(b);
        if (beam.empty())
            continue;
        const double d_o = (r - system.incidence_point_xy(b)).norm();
        out[b] = snr_per_beam(std::abs(beam.gain(r)), target.rcs, beam.incidence_distance(), d_o,
                              system.ofdm(), system.array());
    }
    return out;
}

LinkBudget link_budget(const SensingSystem &system, const TargetState &target, double gain_floor_db)
{
    const Vec2 r = target.position_xy();
    std::vector<double> gains(system.beam_count(), 0.0);
    for (int b = 0; b < system.beam_count(); ++b)
        gains[b] = std::abs(system.beam(b).gain(r));
    LinkBudget lb;
    if (gains.empty())
        return lb;
    const int best = static_cast<int>(std::max_element(gains.begin(), gains.end()) - gains.begin());
    if (gains[best] <= 0.0)
    {
        lb.snr_per_beam_db = lb.coherent_snr_db = -std::numeric_limits<double>::infinity();
        return lb;
    }
    const auto snr = per_beam_snr(system, target);
    const double d_o = (r - system.incidence_point_xy(best)).norm();
    lb.beta = beta(system.beam(best).incidence_distance(), d_o, system.ofdm(), system.array());
    lb.snr_per_beam_db = to_db10(snr[best]);
    const double floor = gains[best] * std::pow(10.0, gain_floor_db / 20.0);
    double count = 0.0, inv_sum = 0.0;
    for (int b = 0; b < system.beam_count(); ++b)
        if (gains[b] >= floor && gains[b] > 0.0)
        {
            count += 1.0;
            inv_sum += 1.0 / snr[b];
        }
    // Image SNR of the gain-normalized coherent sum.
    lb.coherent_snr_db = to_db10(count * count / inv_sum);
    return lb;
}

double doppler_exact(Vec2 velocity, Vec2 target_xy, double incidence_x, double wavelength)
{
    const Vec2 rel = target_xy - Vec2{incidence_x, 0.0};
    return -2.0 / wavelength * velocity.dot(rel) / rel.norm();
}

double doppler_first_order(const TargetState &target, double x_on_reflector, double wavelength)
{
    if (!(target.position.radius > 0.0))
        throw Error("doppler: target radius must be positive");
    const double psi = target.position.angle;
    return -2.0 / wavelength *
           (target.velocity_radial + target.velocity_transverse * std::cos(psi) / target.position.radius * x_on_reflector);
}

std::vector<Complex> pilot_block(std::uint64_t seed, int slot, int subcarrier_count)
{
    auto eng = keyed_engine(seed, slot, kPilotStream);
    static const std::array<Complex, 4> qpsk{std::polar(1.0, kPi / 4), std::polar(1.0, 3 * kPi / 4),
                                             std::polar(1.0, 5 * kPi / 4), std::polar(1.0, 7 * kPi / 4)};
    std::vector<Complex> out(subcarrier_count);
    for (auto &s : out)
        s = qpsk[eng() >> 62];
    return out;
}

EchoTensor synthesize(const SensingSystem &system, std::span<const TargetState> scene, std::uint64_t seed,
                      const SynthesisOptions &options)
{
    for (const auto &t : scene)
        t.validate();
    const auto &cfg = system.ofdm();
    const int q_count = cfg.subcarrier_count;
    const int l_count = system.beam_count();
    EchoTensor e;
    e.subcarrier_count = q_count;
    e.beam_count = l_count;
    e.carrier_frequency = cfg.carrier_frequency;
    e.subcarrier_spacing = cfg.subcarrier_spacing();
    e.seed = seed;
    e.noise_power = system.array().element_count * cfg.noise_variance();
    e.samples.assign(static_cast<std::size_t>(q_count) * l_count, Complex{0.0, 0.0});
    const double lambda = cfg.wavelength();
    const double sqrt_p = std::sqrt(cfg.tx_power);
    const double df = cfg.subcarrier_spacing();
    std::vector<Complex> echo(q_count);

    for (int b = 0; b < l_count; ++b)
    {
        const auto &beam = system.beam(b);
        BeamRecord rec;
        rec.slot = system.slot(b);
        rec.incidence_angle = beam.incidence_angle();
        rec.incidence_x = beam.incidence_x();
        rec.incidence_distance = beam.incidence_distance();
        rec.first_atom = beam.first_atom();
        rec.last_atom = beam.last_atom();
        rec.misses_reflector = beam.empty();
        e.per_beam.push_back(rec);

        std::fill(echo.begin(), echo.end(), Complex{0.0, 0.0});
        const double t = system.slot_time(b);
        const Vec2 p = system.incidence_point_xy(b);
        if (!beam.empty())
        {
            for (std::size_t u = 0; u < scene.size(); ++u)
            {
                const auto &tgt = scene[u];
                const Vec2 v = tgt.velocity_xy();
                const Vec2 r = options.range_migration ? tgt.position_xy() + v * t : tgt.position_xy();
                const Complex g = beam.gain(r);
                if (g == Complex{0.0, 0.0})
                    continue;
                const double d_o = (r - p).norm();
                const double tau = 2.0 * (beam.incidence_distance() + d_o) / kSpeedOfLight;
                Complex alpha = tgt.reflectivity();
                if (options.incoherent_targets)
                {
                    auto eng = keyed_engine(seed, rec.slot, kScatterStream, static_cast<std::uint32_t>(u));
                    alpha *= std::polar(1.0, std::uniform_real_distribution<double>(0.0, kTwoPi)(eng));
                }
                Complex amp = sqrt_p * alpha * system.subcarrier_beta(beam.incidence_distance(), d_o) * g;
                if (!options.range_migration)
                    amp *= std::polar(1.0, kTwoPi * doppler_exact(v, r, p.x, lambda) * t);
                const double phase0 = -kTwoPi * cfg.carrier_frequency * tau;
                const double dphi = -kTwoPi * df * tau;
                for (int q0 = 0; q0 < q_count; q0 += 64)
                {
                    // Exact phasor every 64 subcarriers, recurrence in between.
                    Complex rot = std::polar(1.0, phase0 + dphi * cfg.subcarrier_index(q0));
                    const Complex step = std::polar(1.0, dphi);
                    const int q1 = std::min(q_count, q0 + 64);
                    for (int q = q0; q < q1; ++q)
                    {
                        echo[q] += amp * rot;
                        rot *= step;
                    }
                }
            }
        }
        const auto pilots = pilot_block(seed, rec.slot, q_count);
        auto eng = keyed_engine(seed, rec.slot, kNoiseStream);
        std::normal_distribution<double> normal(0.0, std::sqrt(e.noise_power / 2.0));
        for (int q = 0; q < q_count; ++q)
        {
            Complex z{0.0, 0.0};
            if (options.noise)
            {
                const double re = normal(eng);
                const double im = normal(eng);
                z = {re, im};
            }
            e.at(q, b) = pilots[q] * echo[q] + z;
        }
    }
    return e;
}

} // namespace nlosia

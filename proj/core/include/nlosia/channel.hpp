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

#pragma once

#include "nlosia/codebook.hpp"
#include "nlosia/geometry.hpp"
#include "nlosia/reflector.hpp"
#include "nlosia/waveform.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nlosia
{

// Scene-independent state shared by synthesis and imaging: geometry, waveform, array,
// reflector and the swept beams with their precomputed illumination.
class SensingSystem
{
public:
    SensingSystem(SceneGeometry geometry, OfdmConfig ofdm, BsArray array, ReflectorDesign design,
                  Codebook codebook);

    const SceneGeometry &geometry() const { return geometry_; }
    const OfdmConfig &ofdm() const { return ofdm_; }
    const BsArray &array() const { return array_; }
    const ReflectorDesign &design() const { return design_; }
    const Codebook &codebook() const { return codebook_; }

    int beam_count() const { return static_cast<int>(beams_.size()); }
    const BeamIllumination &beam(int b) const { return beams_[b]; }
    const Footprint &footprint(int b) const { return footprints_[b]; }
    // Slot index l = b - L/2 of beam b.
    int slot(int b) const { return b - beam_count() / 2; }
    double slot_time(int b) const { return slot(b) * ofdm_.slot_duration(); }
    Vec2 incidence_point_xy(int b) const { return {beams_[b].incidence_x(), 0.0}; }

    // Per-subcarrier echo amplitude beta / sqrt(Q).
    double subcarrier_beta(double d_i, double d_o) const;

private:
    SceneGeometry geometry_;
    OfdmConfig ofdm_;
    BsArray array_;
    ReflectorDesign design_;
    Codebook codebook_;
    std::vector<Footprint> footprints_;
    std::vector<BeamIllumination> beams_;
};

struct BeamRecord
{
    int slot = 0;
    double incidence_angle = 0.0;
    double incidence_x = 0.0;
    double incidence_distance = 0.0;
    int first_atom = 0;
    int last_atom = 0;
    bool misses_reflector = false;
};

// Samples stored beam-major: samples[b * Q + q].
struct EchoTensor
{
    int subcarrier_count = 0;
    int beam_count = 0;
    double carrier_frequency = 0.0;
    double subcarrier_spacing = 0.0;
    std::uint64_t seed = 0;
    double noise_power = 0.0;
    std::vector<Complex> samples;
    std::vector<BeamRecord> per_beam;

    Complex &at(int q, int b) { return samples[static_cast<std::size_t>(b) * subcarrier_count + q]; }
    Complex at(int q, int b) const { return samples[static_cast<std::size_t>(b) * subcarrier_count + q]; }
    std::span<const Complex> beam(int b) const
    {
        return {samples.data() + static_cast<std::size_t>(b) * subcarrier_count,
                static_cast<std::size_t>(subcarrier_count)};
    }
};

struct LinkBudget
{
    double beta = 0.0;
    double snr_per_beam_db = 0.0;
    double coherent_snr_db = 0.0;
};

struct SynthesisOptions
{
    bool noise = true;
    bool range_migration = false;
    // Reflection coefficient phase redrawn per beam.
    bool incoherent_targets = false;
};

double beta(double d_i, double d_o, const OfdmConfig &cfg, const BsArray &array);

// Linear per-beam SNR after range compression.
double snr_per_beam(double gain_magnitude, double rcs, double d_i, double d_o, const OfdmConfig &cfg,
                    const BsArray &array);

// Per-beam SNR of a target for every swept beam (linear).
std::vector<double> per_beam_snr(const SensingSystem &system, const TargetState &target);

// Link budget at the beam that best illuminates the target; coherent SNR sums beams within
// gain_floor_db of that beam.
LinkBudget link_budget(const SensingSystem &system, const TargetState &target,
                       double gain_floor_db = -20.0);

// Exact two-way Doppler, -(2/lambda) v . (r - p)/|r - p|. Negative when receding.
double doppler_exact(Vec2 velocity, Vec2 target_xy, double incidence_x, double wavelength);

// -(2/lambda) [v_R + v_T cos(psi) x / R]
double doppler_first_order(const TargetState &target, double x_on_reflector, double wavelength);

// Unit-magnitude QPSK pilots of one beam, keyed by (seed, slot).
std::vector<Complex> pilot_block(std::uint64_t seed, int slot, int subcarrier_count);

EchoTensor synthesize(const SensingSystem &system, std::span<const TargetState> scene,
                      std::uint64_t seed, const SynthesisOptions &options = {});

// Binary container: "NLOSECHO", u32 version, u64 Q, u64 L, f64 f0, f64 df, u64 seed,
// f64 noise power, then interleaved little-endian float64 re/im.
void write_echo_tensor(const std::filesystem::path &path, const EchoTensor &echoes);
EchoTensor read_echo_tensor(const std::filesystem::path &path);
void write_beam_sidecar_csv(const std::filesystem::path &path, const EchoTensor &echoes);
std::vector<BeamRecord> read_beam_sidecar_csv(const std::filesystem::path &path);

} // namespace nlosia

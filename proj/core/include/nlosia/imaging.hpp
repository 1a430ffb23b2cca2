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

#include "nlosia/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace nlosia
{

enum class GridKind
{
    Polar,
    Cartesian
};

struct Axis
{
    double start = 0.0;
    double step = 1.0;
    int count = 1;

    double at(int i) const { return start + step * i; }
    double last() const { return at(count - 1); }
};

// Polar grids use axis1 = R, axis2 = psi; Cartesian grids use axis1 = x, axis2 = y.
struct GridSpec
{
    GridKind kind = GridKind::Polar;
    Axis axis1;
    Axis axis2;

    std::size_t size() const { return static_cast<std::size_t>(axis1.count) * axis2.count; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * axis2.count + j; }
    Vec2 pixel(int i, int j) const;

    // Axis centered on center with half-width half and spacing step (odd count).
    static Axis centered_axis(double center, double half, double step);
    static GridSpec polar(double r_center, double r_half, double dr, double psi_center,
                          double psi_half, double dpsi);
};

// Polar grid covering the ROI with the given spacings.
GridSpec roi_polar_grid(const SceneGeometry &geom, double dr, double dpsi);

struct ImageGrid
{
    GridSpec grid;
    Vec2 hypothesis_velocity;
    std::vector<Complex> values;
    std::vector<std::uint8_t> skipped;

    Complex at(int i, int j) const { return values[grid.index(i, j)]; }
    double magnitude(int i, int j) const { return std::abs(at(i, j)); }
};

// Coherent combination of single-beam values: Inverse sums G-normalized values as written;
// Matched weights each beam by (|G_l| / M_l^2)^2, M_l the atoms in its footprint.
enum class BeamWeighting
{
    Inverse,
    Matched
};

const char *to_string(BeamWeighting weighting);
BeamWeighting parse_beam_weighting(const std::string &name);

struct BackprojectOptions
{
    double gain_floor_db = -20.0;
    BeamWeighting weighting = BeamWeighting::Inverse;
    int range_oversample = 8;
    int threads = 1;
    bool exact_range_sum = false;
};

// Per-beam images and the predicted signal amplitude sqrt(P) beta |G| at every pixel.
struct SingleBeamStack
{
    GridSpec grid;
    std::vector<int> beams;
    std::vector<ImageGrid> images;
    std::vector<std::vector<double>> illumination;
};

// Back-projection against one echo tensor. Holds references to system and echoes.
class BackProjector
{
public:
    BackProjector(const SensingSystem &system, const EchoTensor &echoes,
                  BackprojectOptions options = {});

    const SensingSystem &system() const { return *system_; }
    const EchoTensor &echoes() const { return *echoes_; }
    const BackprojectOptions &options() const { return options_; }

    Complex pixel(Vec2 x, Vec2 xi, bool *skipped = nullptr) const;
    ImageGrid image(const GridSpec &grid, Vec2 xi) const;
    SingleBeamStack single_beam_images(const GridSpec &grid) const;

    // Single-beam values I_l(x) for all beams; zero where the beam is below the floor.
    // illumination receives sqrt(P) beta |G| (zero when skipped) if non-null.
    void beam_values(Vec2 x, std::vector<Complex> &values,
                     std::vector<double> *illumination = nullptr) const;

    // Noise variance of I_l(x) for beam b (infinite when skipped).
    double beam_noise_variance(int b, Vec2 x) const;

    // -2 pi nu_l(x, xi) l T
    double doppler_phase(int b, Vec2 x, Vec2 xi) const;

private:
    Complex range_profile(int b, double tau) const;
    void evaluate(Vec2 x, std::vector<Complex> &values, std::vector<double> *illumination,
                  std::vector<double> *weights) const;

    const SensingSystem *system_;
    const EchoTensor *echoes_;
    BackprojectOptions options_;
    int fft_size_ = 0;
    std::vector<std::vector<Complex>> profiles_;
};

ImageGrid backproject(const SensingSystem &system, const EchoTensor &echoes, const GridSpec &grid,
                      Vec2 xi, const BackprojectOptions &options = {});

// Noiseless unit point target imaged on grid, normalized to 1 at the target.
ImageGrid saf(const SensingSystem &system, PolarPoint target, const GridSpec &grid,
              const BackprojectOptions &options = {});

struct PeakLocation
{
    int i = 0;
    int j = 0;
    double axis1 = 0.0;
    double axis2 = 0.0;
    double magnitude = 0.0;
    bool on_boundary = false;
};

// Global maximum of |I| with parabolic refinement along both axes.
PeakLocation find_peak(const ImageGrid &image);

// Strict local maxima of |I| (8-neighbourhood), strongest first.
std::vector<PeakLocation> local_maxima(const ImageGrid &image);

// Beams whose incidence point lies in the target's discrete effective aperture; beams above
// the gain floor at the target when that aperture is empty.
std::vector<bool> effective_beam_mask(const SensingSystem &system, PolarPoint target,
                                      double gain_floor_db = -20.0);

// Mean speed of the incidence point across consecutive swept beams.
double sweep_velocity(const Codebook &codebook, const SceneGeometry &geom, double slot_duration);

struct MovingImagePrediction
{
    PolarPoint peak;
    double defocus = 1.0;
    bool migration_warning = false;
    int effective_beams = 0;
};

// Beam-sum prediction of the uncompensated image of a moving target over grid.
// far_field selects the closed sinc form.
MovingImagePrediction predict_moving_image(const SensingSystem &system, const TargetState &target,
                                           const GridSpec &grid, bool far_field = false);

// CSV rows (axis1, axis2, magnitude_dB, phase_rad).
void write_image_csv(const std::filesystem::path &path, const ImageGrid &image);
// Gnuplot matrix of magnitude in dB, rows along axis1.
void write_image_matrix(const std::filesystem::path &path, const ImageGrid &image);
// Same container as echo tensors, magic "NLOSIMAG".
void write_image_binary(const std::filesystem::path &path, const ImageGrid &image);
ImageGrid read_image_binary(const std::filesystem::path &path);

} // namespace nlosia

#pragma once

// Screen binning.  Raw weighted histograms merge associatively; profiles are
// the normalized view handed to estimators, writers and tests.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gaugemech/errors.hpp"
#include "gaugemech/spacetime.hpp"

namespace gm {

enum class Axis { x, y };

struct ScreenSpec {
    Axis axis = Axis::y;   // which coordinate of the terminal event is binned
    double x_min = -50.0;  // bin range along that axis
    double x_max = 50.0;
    int n_bins = 400;      // >= 2
    double distance = 100.0;  // longitudinal position of the screen plane

    double bin_width() const { return (x_max - x_min) / n_bins; }
    double bin_center(int i) const { return x_min + (i + 0.5) * bin_width(); }
    void validate() const;

    friend bool operator==(const ScreenSpec&, const ScreenSpec&) = default;
};

// Normalized density profile over a screen.  gauge_density integrates to one
// over the in-range bins; mass landing outside [x_min, x_max] is tallied
// apart and never renormalized back in.
struct DensityProfile {
    std::vector<double> bin_centers;
    std::vector<double> gauge_density;
    std::vector<double> oracle_density;   // empty unless an oracle was attached
    std::vector<double> standard_error;   // empty unless estimated from streams
    double overflow_weight = 0.0;
    std::size_t overflow_count = 0;
    bool empty = true;
    std::map<std::string, std::string> metadata;
};

// Raw accumulation state.
class ScreenHistogram {
  public:
    explicit ScreenHistogram(const ScreenSpec& screen);

    void add(double coordinate, double weight);
    void add_terminal(const Event& terminal, double weight);

    // Bin-wise sum; screens must match.
    void merge(const ScreenHistogram& other);

    const std::vector<double>& weights() const noexcept { return weights_; }
    double total_weight() const noexcept { return total_; }
    const ScreenSpec& screen() const noexcept { return screen_; }

    DensityProfile normalized() const;

  private:
    ScreenSpec screen_;
    std::vector<double> weights_;
    double total_ = 0.0;
    double overflow_weight_ = 0.0;
    std::size_t overflow_count_ = 0;
};

// One-shot helper over a batch of weighted paths.
DensityProfile accumulate_screen(
    const std::vector<std::pair<Path, double>>& batch, const ScreenSpec& screen);

}  // namespace gm

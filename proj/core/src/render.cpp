#include "symart/render.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace symart {

void validate_window(const Window& w, bool upper_half_plane) {
  if (!std::isfinite(w.x_min) || !std::isfinite(w.x_max) || !std::isfinite(w.y_min) || !std::isfinite(w.y_max)) {
    throw std::invalid_argument("window: bounds must be finite");
  }
  if (!(w.x_max > w.x_min)) throw std::invalid_argument("window: x_max must exceed x_min");
  if (!(w.y_max > w.y_min)) throw std::invalid_argument("window: y_max must exceed y_min");
  if (w.width < 1 || w.height < 1) throw std::invalid_argument("window: pixel dimensions must be >= 1");
  if (upper_half_plane && !(w.y_min > 0.0)) throw std::invalid_argument("window: hyperbolic windows need y_min > 0");
}

Complex pixel_center(const Window& w, int row, int col, bool upper_half_plane) {
  const double x = w.x_min + (col + 0.5) * w.dx();
  double y = w.y_max - (row + 0.5) * w.dy();
  if (upper_half_plane) y = std::max(y, 0.5 * w.dy());
  return {x, y};
}

std::optional<PixelIndex> pixel_of(const Window& w, Complex z) {
  const double tc = (z.real() - w.x_min) / w.dx() - 0.5;
  const double tr = (w.y_max - z.imag()) / w.dy() - 0.5;
  if (!std::isfinite(tc) || !std::isfinite(tr)) return std::nullopt;
  const double col = std::ceil(tc - 0.5);
  const double row = std::ceil(tr - 0.5);
  if (col < 0.0 || row < 0.0 || col >= w.width || row >= w.height) return std::nullopt;
  return PixelIndex{static_cast<int>(row), static_cast<int>(col)};
}

RasterImage render(const PlaneFunction& f, const Window& window, const ColorMap& cmap,
                   const OutOfRangePolicy& policy, const RenderOptions& options) {
  validate_window(window, options.upper_half_plane);
  validate_policy(policy);
  RasterImage img(window.width, window.height);

  auto render_row = [&](int r) {
    auto row = img.row(r);
    for (int c = 0; c < window.width; ++c) {
      const Complex z = pixel_center(window, r, c, options.upper_half_plane);
      row[c] = sample_colormap(f(z), cmap, policy);
    }
  };

  int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, window.height);
  if (workers == 1) {
    for (int r = 0; r < window.height; ++r) render_row(r);
    return img;
  }

  std::atomic<int> next_row{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        try {
          for (int r = next_row.fetch_add(1); r < window.height; r = next_row.fetch_add(1)) render_row(r);
        } catch (...) {
          // Push the row counter past the end so the other workers stop early.
          next_row.store(window.height);
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return img;
}

double image_rotation_residual(const RasterImage& img, double angle, std::optional<std::pair<double, double>> center_px,
                               int tolerance) {
  if (img.width() != img.height()) throw std::invalid_argument("image_rotation_residual: image must be square");
  if (img.empty()) return 0.0;
  const auto [cx, cy] = center_px.value_or(std::pair{img.width() / 2.0, img.height() / 2.0});
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);

  std::size_t compared = 0;
  std::size_t mismatched = 0;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const double px = c + 0.5 - cx;
      const double py = r + 0.5 - cy;
      const double qx = cx + cs * px - sn * py;
      const double qy = cy + sn * px + cs * py;
      const double fc = std::floor(qx);
      const double fr = std::floor(qy);
      if (fc < 0.0 || fr < 0.0 || fc >= img.width() || fr >= img.height()) continue;
      const Rgb a = img.at(r, c);
      const Rgb b = img.at(static_cast<int>(fr), static_cast<int>(fc));
      ++compared;
      if (std::abs(a.r - b.r) > tolerance || std::abs(a.g - b.g) > tolerance || std::abs(a.b - b.b) > tolerance) {
        ++mismatched;
      }
    }
  }
  return compared == 0 ? 0.0 : static_cast<double>(mismatched) / static_cast<double>(compared);
}

}  // namespace symart

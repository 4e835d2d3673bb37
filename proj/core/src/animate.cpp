#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "symart/design.hpp"
#include "symart/png_io.hpp"

namespace symart {

std::string frame_file_name(int n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04d.png", n);
  return buf;
}

namespace {

void write_text_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

FrameSequence animate(const DesignSpec& spec, const std::filesystem::path& dir, const AnimateOptions& options) {
  if (!spec.animation) throw SpecError({"animation: block is required to animate"});
  validate_design_spec(spec);
  const ColorMap cmap = load_colormap(spec);
  const int frames = spec.animation->frames;
  const double theta = spec.animation->theta;

  std::filesystem::create_directories(dir);
  FrameSequence seq;
  seq.directory = dir;
  for (int n = 0; n < frames; ++n) {
    seq.files.push_back(dir / frame_file_name(n));
    seq.parameters.push_back(std::polar(1.0, n * theta));
  }

  auto render_frame = [&](int n) {
    const RasterImage img = render_design(spec, cmap, n, RunOptions{options.workers});
    write_png(seq.files[static_cast<std::size_t>(n)], img);
  };

  if (options.parallel_frames && frames > 1) {
    const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    const int threads = std::min(frames, hw);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> pool;
      for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          for (int n = next.fetch_add(1); n < frames && !failed; n = next.fetch_add(1)) {
            try {
              render_frame(n);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!error) error = std::current_exception();
              failed = true;
            }
          }
        });
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (int n = 0; n < frames; ++n) render_frame(n);
  }

  nlohmann::json manifest;
  manifest["frames"] = frames;
  manifest["theta"] = theta;
  nlohmann::json entries = nlohmann::json::array();
  for (int n = 0; n < frames; ++n) {
    const Complex p = seq.parameters[static_cast<std::size_t>(n)];
    entries.push_back({{"frame", n}, {"file", frame_file_name(n)}, {"p", {p.real(), p.imag()}}});
  }
  manifest["parameters"] = entries;
  write_text_atomically(dir / "manifest.json", manifest.dump(2) + "\n");
  return seq;
}

}  // namespace symart

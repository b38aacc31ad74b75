// Samples a few scenarios from the default model and prints a one-line
// summary of each, followed by the first scenario's manifest record.
#include <cstdio>
#include <cstdlib>

#include "phav/phav.hpp"

int main(int argc, char** argv) {
  const std::uint64_t master = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
  const auto library = phav::default_library();
  const auto params = phav::default_params(library.specs());

  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto sc = phav::sample_scenario(params, library, phav::mix_seed(master, i));
    std::printf("%-26s %-8s %-8s %-6s %-9s %-12s L=%.2fs (%zu frames) motion=%s\n",
                sc.action_name.c_str(), std::string(phav::to_string(sc.scene.environment)).c_str(),
                std::string(phav::to_string(sc.scene.camera)).c_str(),
                std::string(phav::to_string(sc.world.phase)).c_str(),
                std::string(phav::to_string(sc.world.weather)).c_str(),
                std::string(phav::to_string(sc.scene.variation)).c_str(), sc.scene.duration, sc.scene.frames,
                sc.scene.motion.c_str());
  }

  const auto video = phav::realize_scenario(params, library, phav::sample_scenario(params, library, master));
  std::printf("\n%s\n", phav::io::record_to_json(video.record).dump(2).c_str());
  const auto& box = video.boxes.front();
  std::printf("frame 0 bbox: (%.1f, %.1f) - (%.1f, %.1f)\n", box.x0, box.y0, box.x1, box.y1);
  return 0;
}

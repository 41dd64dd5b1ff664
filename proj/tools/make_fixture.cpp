// Generates the bundled synthetic landscape (grids, vectors, fire masks)
// plus a ready-to-run config.toml.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wildfire/error.hpp"
#include "wildfire/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write the synthetic wildfire fixture"};
  std::string out_dir = "fixture";
  std::uint64_t seed = 20150101;
  int scenario = 1;
  int size = 200;
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Landscape seed");
  app.add_option("--scenario", scenario, "Sampling scenario (1, 2 or 3)")
      ->check(CLI::Range(1, 3));
  app.add_option("--size", size, "Grid width/height in cells");
  CLI11_PARSE(app, argc, argv);

  try {
    wildfire::SyntheticSpec spec;
    spec.seed = seed;
    spec.width = size;
    spec.height = size;
    const auto land = wildfire::make_synthetic_landscape(spec);
    wildfire::write_synthetic_fixture(land, out_dir, scenario, seed);
    std::cerr << "fixture written to " << out_dir << "\n";
    return 0;
  } catch (const wildfire::Error& e) {
    std::cerr << "firemap-make-fixture: " << e.what() << "\n";
    return 3;
  }
}

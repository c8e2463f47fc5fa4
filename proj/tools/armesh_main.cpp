// armesh — convert mesh-based finite-element results (legacy VTK) into
// AR-ready GLB assets: boundary extraction, vertex colors, decimation,
// stop-motion / morph-target animation, plus inspect and viewer-page emission.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "armesh/armesh.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void print_result(const armesh::ConvertResult& result) {
  for (const std::string& line : result.stages) std::cout << line << "\n";
  for (const std::string& w : result.warnings) std::cout << "warning: " << w << "\n";
}

int data_error(const armesh::Error& e) {
  std::cerr << "error: " << armesh::error_code_name(e.code()) << ": " << e.detail() << "\n";
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"armesh — VTK finite-element results to AR-ready GLB assets"};
  app.require_subcommand(1);

  // ---- convert ----
  auto* convert = app.add_subcommand("convert", "Run the full conversion pipeline");
  std::vector<std::string> inputs;
  armesh::ConvertOptions opt;
  bool sort_natural = false;
  convert->add_option("inputs", inputs, "Input .vtk files (or quoted glob patterns)")->required();
  convert->add_option("--field", opt.field, "Field to color by: NAME or NAME:x|y|z|mag");
  convert->add_option("--colormap", opt.colormap, "Built-in map name or a 't r g b' stops file")
      ->default_val("coolwarm");
  convert->add_option("--range", opt.range, "Color range: global, perframe or MIN:MAX")
      ->default_val("global");
  convert->add_option("--decimate", opt.decimate_ratio, "Keep this fraction of triangles (0,1]")
      ->check(CLI::Range(1e-6, 1.0))->default_val(1.0);
  auto* solidify_opt = convert->add_option("--solidify", opt.solidify_thickness,
                                           "Thicken shells by this amount (0 = 1% of diagonal)");
  convert->add_option("--beam-radius", opt.beam_radius,
                      "Tube radius for line elements (0 = 2% of diagonal)");
  convert->add_option("--beam-sides", opt.beam_sides, "Tube cross-section sides")
      ->check(CLI::Range(3, 256))->default_val(12);
  convert->add_option("--animate", opt.animate, "Animation mode for multi-frame input")
      ->check(CLI::IsMember({"stop", "morph"}));
  convert->add_option("--interp", opt.interp, "Morph playback interpolation")
      ->check(CLI::IsMember({"step", "linear"}))->default_val("step");
  convert->add_option("--fps", opt.fps, "Frames per second")->check(CLI::PositiveNumber)
      ->default_val(12.0);
  convert->add_option("--fit", opt.fit_size, "Largest extent of the placed model in meters")
      ->check(CLI::PositiveNumber)->default_val(0.5);
  convert->add_flag("--unlit", opt.unlit, "Emit the unlit material extension");
  convert->add_option("--ply-out", opt.ply_out, "Also write the colored surface of frame 0 as PLY");
  convert->add_option("--out", opt.out, "Output GLB path")->required();
  convert->add_flag("--sort-natural", sort_natural, "Numeric-aware ordering of glob matches");
  convert->set_config("--config", "", "Read options from a key=value file");

  // ---- inspect ----
  auto* inspect = app.add_subcommand("inspect", "Describe a VTK, PLY or GLB file");
  std::string inspect_path;
  inspect->add_option("path", inspect_path, "File to inspect")->required();

  // ---- page ----
  auto* page = app.add_subcommand("page", "Emit a static <model-viewer> page for a GLB");
  std::string page_model, page_title = "AR model", page_dir = ".";
  page->add_option("model", page_model, "Model file the page should reference")->required();
  page->add_option("--title", page_title, "Page title")->default_val("AR model");
  page->add_option("--dir", page_dir, "Directory to emit the page into")->default_val(".");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: Usage: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (convert->parsed()) {
      opt.solidify_on = solidify_opt->count() > 0;
      opt.inputs = armesh::expand_inputs(inputs, sort_natural);
      armesh::ConvertResult result = armesh::run_convert(opt);
      print_result(result);
      std::cout << "wrote " << opt.out << " (" << result.glb.size() << " bytes)\n";
      return kExitOk;
    }
    if (inspect->parsed()) {
      std::cout << armesh::inspect_file(inspect_path) << "\n";
      return kExitOk;
    }
    if (page->parsed()) {
      armesh::PageResult result = armesh::emit_viewer_page(page_model, page_title, page_dir);
      std::cout << "wrote " << result.page_path << "\n";
      std::cout << "qr-url: host this directory and QR-encode the URL of " << result.url_hint << "\n";
      return kExitOk;
    }
  } catch (const armesh::Error& e) {
    return data_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

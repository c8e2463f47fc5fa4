// armesh.hpp — Umbrella header for the armesh library.
#pragma once

#include "armesh/animate.hpp"
#include "armesh/colormap.hpp"
#include "armesh/core.hpp"
#include "armesh/decimate.hpp"
#include "armesh/gltf.hpp"
#include "armesh/mesh.hpp"
#include "armesh/page.hpp"
#include "armesh/pipeline.hpp"
#include "armesh/ply.hpp"
#include "armesh/surface.hpp"
#include "armesh/vtk.hpp"

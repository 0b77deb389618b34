#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hexsweep/vec3.hpp"

namespace hexsweep {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

/// Synthetic grid description: an nx*ny*nz block of unit-spaced hexahedra,
/// twisted about the centerline of one axis. The rotation angle grows
/// linearly from 0 at the near end to twist_angle_max at the far end.
struct MeshConfig {
    int nx = 1;
    int ny = 1;
    int nz = 1;
    double twist_angle_max = 0.5; // radians at the far end of the twist axis
    Axis twist_axis = Axis::Z;
    int fem_order = 1; // p in {1, 2, 3}

    void validate() const; // throws ConfigError
};

inline constexpr std::int32_t kBoundary = -1;
inline constexpr int kFacesPerElem = 6;
inline constexpr int kCornersPerElem = 8;

// Corner c = (di, dj, dk) has local id di + 2*dj + 4*dk on the reference cube.
// Local faces: 0:-x 1:+x 2:-y 3:+y 4:-z 5:+z.
// Each face lists its corners as (c00, c10, c11, c01) of the bilinear
// parameterization r(u,v); the order is chosen so r_u x r_v points outward.
inline constexpr int kFaceCorners[kFacesPerElem][4] = {
    {0, 4, 6, 2}, // -x
    {1, 3, 7, 5}, // +x
    {0, 1, 5, 4}, // -y
    {2, 6, 7, 3}, // +y
    {0, 2, 3, 1}, // -z
    {4, 5, 7, 6}, // +z
};

/// Opposing local face across a shared face (toggle the low bit).
inline constexpr int opposite_face(int face) { return face ^ 1; }

class HexMesh {
public:
    MeshConfig config;
    std::vector<Vec3> node_coords;                             // (nx+1)(ny+1)(nz+1)
    std::vector<std::array<std::int32_t, 8>> elem_nodes;       // corner node ids
    std::vector<std::array<std::int32_t, 6>> elem_neighbors;   // kBoundary on the hull
    std::vector<std::array<Vec3, 6>> normals;                  // outward, area-weighted
    std::vector<std::int32_t> material;                        // synthetic: all 0

    int elem_count() const { return static_cast<int>(elem_nodes.size()); }
    int node_count() const { return static_cast<int>(node_coords.size()); }

    int elem_index(int i, int j, int k) const {
        return i + config.nx * (j + config.ny * k);
    }

    /// Map a reference-cube point through the trilinear corner-node geometry.
    Vec3 map_point(int elem, const Vec3& ref) const;
};

enum class FaceOrientation { Inflow, Outflow, Tangent };

/// Upwind classification of a face against a sweep direction, using the
/// stored area-weighted normal. Tolerance 1e-12 * |n|.
FaceOrientation face_orientation(const HexMesh& mesh, int elem, int face, const Vec3& direction);

/// Build the twisted grid. Throws MeshError if the twist drives the
/// Jacobian determinant non-positive at any volume quadrature point of the
/// configured FEM order.
HexMesh build_twisted_grid(const MeshConfig& config);

/// Debug dump: nodes, connectivity and neighbors as JSON. Not a stable format.
void dump_mesh_json(const HexMesh& mesh, const std::string& path);

} // namespace hexsweep

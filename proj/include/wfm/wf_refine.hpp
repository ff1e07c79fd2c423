// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wfm/mesh.hpp"

namespace wfm {

/// Incenter as the face-area weighted vertex average; weight i is the area of
/// the face opposite vertex i. Throws DegenerateElement when the volume is
/// below 1e-14 h^3.
Point3 incenter(const std::array<Point3, 4>& tet);

/// Split point of a macro face.
///
/// One incenter (boundary face): the barycenter. Two incenters (interior
/// face): the intersection of the segment joining them with the face plane,
/// which must lie strictly inside the face (all barycentric coordinates
/// >= 1e-12), otherwise InvalidSplit.
Point3 face_split_point(const std::array<Point3, 3>& face, std::span<const Point3> incenters);

/// Worsey-Farin refinement with provenance back to the macro mesh.
///
/// Fine vertex numbering: macro vertices, then one incenter per macro tet,
/// then one split point per macro face. Children of macro tet t occupy fine
/// ids 12t .. 12t+11 ordered by (local face, Clough-Tocher sector).
struct WorseyFarinMesh {
  Mesh macro;
  Mesh fine;
  std::vector<Point3> incenter_of;
  std::vector<Point3> face_point_of;
  std::vector<std::array<int, 12>> children_of;
  std::vector<std::array<FaceKey, 3>> face_children_of;

  int incenter_vertex(int macro_tet) const { return macro.num_vertices() + macro_tet; }
  int face_point_vertex(int macro_face) const {
    return macro.num_vertices() + macro.num_tets() + macro_face;
  }
};

WorseyFarinMesh worsey_farin_refine(const Mesh& mesh);

struct WfValidationReport {
  bool conforming = false;
  bool child_count_ok = false;
  bool vertex_count_ok = false;
  bool positive_volumes = false;
  /// max over macro tets of |sum(child volumes) - parent| / parent
  double max_child_volume_residual = 0.0;
  /// |sum(fine volumes) - |domain|| / |domain|
  double total_volume_residual = 0.0;
  int unmatched_interior_faces = 0;
  int overloaded_faces = 0;
  double min_shape_ratio = 0.0;
  double max_shape_ratio = 0.0;
  /// Smallest barycentric coordinate of any face point in its macro face.
  double min_face_point_barycentric = 0.0;

  bool ok() const;
};

/// Checks a refinement given as raw fine arrays so that corrupted data can be
/// audited without first building a Mesh. Never throws on bad data.
WfValidationReport validate_refinement(const Mesh& macro, std::span<const Point3> fine_vertices,
                                       std::span<const Tetra> fine_tets,
                                       std::span<const std::array<int, 12>> children_of,
                                       std::span<const Point3> face_point_of = {});

WfValidationReport validate_wf(const WorseyFarinMesh& wf);

/// Plain-text key: value lines.
void write_report(std::ostream& out, const WfValidationReport& report);

}  // namespace wfm

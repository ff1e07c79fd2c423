// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wfm/dof_map.hpp"
#include "wfm/mesh.hpp"
#include "wfm/quadrature.hpp"
#include "wfm/reference_basis.hpp"
#include "wfm/sparse.hpp"

namespace wfm {

/// (curl u, curl v) on the interleaved vector Lagrange space. Requires
/// quadrature exactness >= 2(k-1).
SymmetricSparseMatrix assemble_curl_curl(const Mesh& mesh, const DofMap& dofs,
                                         const ReferenceBasis& basis, const QuadratureRule& quad);

/// (u, v) on the interleaved vector Lagrange space. Requires quadrature
/// exactness >= 2k.
SymmetricSparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs, const ReferenceBasis& basis,
                                    const QuadratureRule& quad);

}  // namespace wfm

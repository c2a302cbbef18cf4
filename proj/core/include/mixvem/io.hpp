#pragma once

#include "mixvem/analysis.hpp"
#include "mixvem/assembly.hpp"
#include "mixvem/eigensolver.hpp"
#include "mixvem/mesh.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mixvem::io {

// poly-mesh v1
//   <nv>          then nv lines  "x y"
//   <ne>          then ne lines  "v0 v1 tag"
//   <nc>          then nc lines  of counterclockwise vertex indices
void write_mesh(std::ostream& os, const PolygonalMesh& mesh);
void write_mesh(const std::filesystem::path& path, const PolygonalMesh& mesh);
PolygonalMesh read_mesh(std::istream& is);
PolygonalMesh read_mesh(const std::filesystem::path& path);

/// Coordinate format, one "row col value" line per stored nonzero.
void write_coo(std::ostream& os, const SparseMatrix& m);
/// Writes A.coo, B.coo, M.coo into `dir`; returns the files written.
std::vector<std::filesystem::path> dump_matrices(const std::filesystem::path& dir,
                                                 const GlobalPencil& pencil);

/// Legacy VTK unstructured grid with per-cell u of each mode and the cell
/// projection of sigma as a vector field.
void write_vtk_mode(std::ostream& os, const PolygonalMesh& mesh, const DofMap& dofs,
                    const EigenResult& result, int mode);
std::vector<std::filesystem::path> write_vtk_modes(const std::filesystem::path& dir,
                                                   const PolygonalMesh& mesh, const DofMap& dofs,
                                                   const EigenResult& result);

/// Six significant digits, locale independent.
std::string format_number(double v);

/// Writes `contents` to `path` through a temporary file and rename.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

} // namespace mixvem::io

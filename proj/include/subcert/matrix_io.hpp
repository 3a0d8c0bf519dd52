#pragma once

#include <string>

#include "subcert/extremal.hpp"
#include "subcert/stiefel.hpp"

namespace subcert {

/// Auto resolves by extension: ".json" means JSON, anything else CSV.
enum class FileFormat { Auto, Csv, Json };

/// CSV: one "x,y" line per row, "." decimal separator, blank lines ignored.
/// JSON: {"n": int, "rows": [[x, y], ...]}. The parsed rows pass through the
/// orthonormality gate, so a returned matrix is always valid. Throws IoError
/// when the file cannot be read, ParseError on malformed content.
StiefelMatrix read_matrix(const std::string& path,
                          FileFormat fmt = FileFormat::Auto);

/// Writers emit 17 significant digits, enough to round-trip every double.
void write_matrix(const std::string& path, const StiefelMatrix& a,
                  FileFormat fmt = FileFormat::Auto);

/// CSV: one "x,y" edge per line; JSON: {"vectors": [[x, y], ...]}. The edges
/// pass through the polygon gate (perimeter normalization and closure).
PolygonInstance read_polygon(const std::string& path,
                             FileFormat fmt = FileFormat::Auto);

}  // namespace subcert

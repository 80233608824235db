#pragma once

// JSON documents for marked and bent groups, certificate records, and atomic
// file output.
//
// Matrices are row-major lists of [re, im] pairs; doubles are written in
// shortest round-trip form, so load -> dump reproduces the file exactly.

#include <string>
#include <variant>

#include "json.hpp"

#include "chbend/cartan.hpp"
#include "chbend/collar.hpp"

namespace chbend {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent input documents.
class SchemaError : public DomainError {
 public:
  using DomainError::DomainError;
};

json group_to_json(const MarkedGroup& g);
/// Validates relations at relation_tol (ConstructionError with the residual).
MarkedGroup group_from_json(const json& j, double relation_tol = 1e-10);

/// Base group, parameters, bent generators and the chi table.
json bent_to_json(const BentGroup& b);
/// Rebuilds the bend from base and parameters and checks the stored bent
/// generators against it.
BentGroup bent_from_json(const json& j);

json certificate_to_json(const Certificate& c);
json scan_to_json(const InjectivityScan& s);
json collar_to_json(const CollarReport& r, const std::vector<std::string>& names);
json point_to_json(const HeisenbergPoint& p);

/// Either document kind, by its "format" field.
using Document = std::variant<MarkedGroup, BentGroup>;
Document document_from_json(const json& j);
Document load_document(const std::string& path);

std::string dump(const json& j);

std::string read_file(const std::string& path);
/// Writes to a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace chbend

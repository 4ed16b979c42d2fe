#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kirigami {

/// Failure categories. The CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidSpec,
  DisplacementOutOfRange,
  StationOutOfRange,
  InvalidRibbon,
  FlatRibbon,
  DegenerateAngle,
  InsufficientData,
  SingularDesign,
  MissingColumn,
  SchemaError,
  InvalidRequirement,
  UnknownConstants,
  EmptyGrid,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::DisplacementOutOfRange: return "DisplacementOutOfRange";
    case ErrorKind::StationOutOfRange: return "StationOutOfRange";
    case ErrorKind::InvalidRibbon: return "InvalidRibbon";
    case ErrorKind::FlatRibbon: return "FlatRibbon";
    case ErrorKind::DegenerateAngle: return "DegenerateAngle";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvalidRequirement: return "InvalidRequirement";
    case ErrorKind::UnknownConstants: return "UnknownConstants";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kirigami

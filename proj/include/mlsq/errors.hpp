#pragma once

#include <stdexcept>
#include <string>

namespace mlsq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// model
struct ExponentOutOfRange : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct InvalidLayer : Error { using Error::Error; };

// transfer
struct NonPositiveWidth : Error { using Error::Error; };
struct SingularMatching : Error { using Error::Error; };

// expansion
struct ZeroWavenumber : Error { using Error::Error; };
struct CosineZero : Error { using Error::Error; };
struct StructureTooLarge : Error { using Error::Error; };

// squeeze
struct ScheduleTooShort : Error { using Error::Error; };
struct NumericalOverflow : Error { using Error::Error; };
struct Unclassifiable : Error { using Error::Error; };
struct ClassMismatch : Error { using Error::Error; };

// resonance
struct InadmissibleConfiguration : Error { using Error::Error; };
struct UnboundSymbol : Error { using Error::Error; };

// cli
struct ConfigError : Error { using Error::Error; };

}  // namespace mlsq

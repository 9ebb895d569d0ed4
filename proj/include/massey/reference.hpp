#pragma once

// Single-threaded reference implementations of the validators.  They are the
// oracle the OpenMP kernels in dgalg.cpp are tested against and are reached
// through Execution::serial.

#include <optional>
#include <span>
#include <string_view>

#include "massey/dgalg.hpp"

namespace massey::reference {

ValidationReport check_derivation(const DgAlgebra& alg, std::string_view generator);
ValidationReport check_relation(const DgAlgebra& alg, const Relation& relation,
                                std::optional<std::span<const Tuple>> scope);
ValidationReport check_symmetry(const DgAlgebra& alg, std::string_view generator);

}  // namespace massey::reference

#pragma once

#include <string>

#include "qoptics/fock.hpp"

namespace qoptics {

// Signed ket sum in textbook notation, e.g. "(|0101⟩+|0110⟩)/√2" or
// "−|0110⟩". Amplitudes below `tol` are dropped. When the surviving terms do
// not share one magnitude with phases in {±1, ±i}, each amplitude is written
// out numerically.
std::string ket_notation(const FockVector& v, double tol = 1e-10);

// Digits of an occupation tuple, "0110"; ':'-separated if any count exceeds 9.
std::string occupation_digits(const Occupation& occ);

}  // namespace qoptics

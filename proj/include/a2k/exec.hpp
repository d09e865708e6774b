#pragma once

namespace a2k {

/// Selects between the OpenMP kernel and its serial reference.
/// Both variants produce identical results; the serial one is kept for
/// cross-checking in tests and as the baseline in benchmarks.
enum class Exec { serial, parallel };

}  // namespace a2k

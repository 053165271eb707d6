#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace qres {

/// Decimal form that round-trips a double exactly ("%.17g").
/// Every numeric field in the CSV and checkpoint files uses this format.
std::string format_double(double value);

/// Parses a value written by format_double (also accepts "inf"/"nan").
double parse_double(const std::string& text);

/// Mixes a base seed with a stage/stream index into an independent 64-bit
/// seed (splitmix64 finalizer applied twice).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots and
/// reduce afterwards in index order, which keeps results bitwise identical
/// for every thread count. threads == 0 means hardware concurrency.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace qres

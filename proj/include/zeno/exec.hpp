#pragma once

namespace zeno {

// Serial is the reference path; Parallel runs the same loop body under OpenMP.
// Both must give bit-identical results for a fixed seed.
enum class Exec { Serial, Parallel };

int max_threads();

}  // namespace zeno

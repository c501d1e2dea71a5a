#pragma once

namespace dance {

/// Kernels with a Parallel variant also keep the Serial one as the reference
/// implementation; both must produce identical output.
enum class Execution { Serial, Parallel };

/// Thread count for parallel kernels: `requested` when positive, otherwise the
/// OpenMP default. DANCE_NO_PARALLEL=1 in the environment forces 1.
int resolve_jobs(int requested);

/// Serial when the resolved job count is 1.
Execution execution_for(int jobs);

}  // namespace dance

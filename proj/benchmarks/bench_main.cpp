#include <benchmark/benchmark.h>

// The packaged benchmark_main archive is not portable across compiler
// versions, so the entry point lives here.
BENCHMARK_MAIN();

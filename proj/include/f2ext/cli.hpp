#pragma once

namespace f2ext {

/* Subcommands: validate, ext, margolis, cobar, mrss, parabola, chart.
 * Exit codes: 0 success, 1 runtime/validation failure (an "error: ..." line
 * goes to stderr), 2 usage errors. */
int cli_main(int argc, char** argv);

}  // namespace f2ext

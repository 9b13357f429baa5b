#ifndef OHO_TRACE_HPP
#define OHO_TRACE_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oho/diagnostics.hpp"

namespace oho {

// One row per training step.
struct StepRecord {
  std::int64_t step = 0;
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  std::optional<double> test_loss;       // filled on epoch-final steps
  std::vector<double> phi;               // values applied at this step
  std::vector<double> gamma_sq_norms;    // squared column norms after the step
  std::optional<CorrelationStat> gc;     // defined once a full window has been seen
};

struct HaltInfo {
  std::int64_t step = 0;
  std::int64_t column = -1;
  std::string message;
};

struct RunTrace {
  std::vector<std::string> phi_names;
  std::vector<StepRecord> records;
  std::optional<HaltInfo> halt;  // set when the run stopped on numerical instability

  double final_val_loss() const;
};

// Shortest round-trip decimal form (std::to_chars); deterministic.
std::string format_double(double v);

// Header: step,epoch,train_loss,val_loss,test_loss,<phi names>,
//         gammaF.<phi names>,gc_mean,gc_std
// CRLF line endings; empty optional fields stay empty.
void write_trace_csv(const RunTrace& trace, std::ostream& out);
void write_trace_csv_file(const RunTrace& trace, const std::string& path);

}  // namespace oho

#endif  // OHO_TRACE_HPP

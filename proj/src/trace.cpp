#include "oho/trace.hpp"

#include <charconv>
#include <fstream>
#include <limits>

#include "oho/errors.hpp"

namespace oho {

double RunTrace::final_val_loss() const {
  if (records.empty()) return std::numeric_limits<double>::quiet_NaN();
  return records.back().val_loss;
}

std::string format_double(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << "step,epoch,train_loss,val_loss,test_loss";
  for (const auto& n : trace.phi_names) out << ',' << n;
  for (const auto& n : trace.phi_names) out << ",gammaF." << n;
  out << ",gc_mean,gc_std\r\n";

  for (const auto& r : trace.records) {
    out << r.step << ',' << r.epoch << ',' << format_double(r.train_loss) << ','
        << format_double(r.val_loss) << ',';
    if (r.test_loss) out << format_double(*r.test_loss);
    for (double v : r.phi) out << ',' << format_double(v);
    for (double v : r.gamma_sq_norms) out << ',' << format_double(v);
    out << ',';
    if (r.gc) out << format_double(r.gc->mean);
    out << ',';
    if (r.gc) out << format_double(r.gc->stddev);
    out << "\r\n";
  }
}

void write_trace_csv_file(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_trace_csv(trace, out);
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace oho

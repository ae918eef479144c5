#include "crosslab/report.hpp"

#include <sstream>

namespace crosslab {

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << sweep_csv_header() << "\n";
  for (const SweepRow& r : rows) {
    os << r.variable << "," << r.value << "," << r.target << "," << r.gap << "," << r.std_error
       << "," << r.samples << "," << r.seed << "\n";
  }
  return os.str();
}

std::string records_to_csv(const std::vector<ReportRecord>& records) {
  std::ostringstream os;
  os.precision(17);
  os << "quantity,value,std_error,samples,seed,closed_form,gap\n";
  for (const ReportRecord& r : records) {
    os << r.quantity << "," << r.value << ",";
    if (r.std_error) os << *r.std_error;
    os << ",";
    if (r.samples) os << *r.samples;
    os << ",";
    if (r.seed) os << *r.seed;
    os << ",";
    if (r.closed_form) os << *r.closed_form;
    os << ",";
    if (r.gap) os << *r.gap;
    os << "\n";
  }
  return os.str();
}

}  // namespace crosslab

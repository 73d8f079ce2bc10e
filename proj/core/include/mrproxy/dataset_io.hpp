#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mrproxy/trio_scm.hpp"

namespace mrproxy {

// Full export header. Counterfactual columns carry the child generation.
inline constexpr const char* kDatasetCsvHeader =
    "id,d_parent,d_child,transmitted,a_parent,y_parent,a_child,y_child,"
    "u_parent,u_child,a_cf_low,a_cf_high,y_cf_0,y_cf_1";

// Columns of the full header visible without --reveal-latent.
inline constexpr const char* kObservedCsvHeader = "id,d_child,y_parent,a_child";

void write_dataset_csv(std::ostream& out, const TrioDataset& data, bool reveal_latent);

// Numeric CSV keyed by header name. Throws Error on ragged rows or
// unparsable cells (with line numbers).
using CsvColumns = std::map<std::string, std::vector<double>>;
CsvColumns read_csv_columns(std::istream& in);

// Requires d_child, a_child and y_parent.
ObservedData observed_from_columns(const CsvColumns& cols);

}  // namespace mrproxy

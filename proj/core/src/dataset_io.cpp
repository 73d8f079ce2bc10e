#include "mrproxy/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "mrproxy/config_json.hpp"
#include "mrproxy/errors.hpp"

namespace mrproxy {

void write_dataset_csv(std::ostream& out, const TrioDataset& data, bool reveal_latent) {
  out << (reveal_latent ? kDatasetCsvHeader : kObservedCsvHeader) << '\n';
  const auto& p = data.parent;
  const auto& c = data.child;
  std::string line;
  for (std::size_t i = 0; i < data.size(); ++i) {
    line = std::to_string(i);
    auto put = [&](double v) {
      line += ',';
      line += format_number(v);
    };
    if (reveal_latent) {
      put(p.dosage[i]);
      put(c.dosage[i]);
      put(data.transmitted[i]);
      put(p.exposure[i]);
      put(p.outcome[i]);
      put(c.exposure[i]);
      put(c.outcome[i]);
      put(p.confounder[i]);
      put(c.confounder[i]);
      put(c.exposure_cf_low[i]);
      put(c.exposure_cf_high[i]);
      put(c.outcome_cf_0[i]);
      put(c.outcome_cf_1[i]);
    } else {
      put(c.dosage[i]);
      put(p.outcome[i]);
      put(c.exposure[i]);
    }
    line += '\n';
    out << line;
  }
}

CsvColumns read_csv_columns(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> names;
  {
    std::istringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) names.push_back(name);
  }
  CsvColumns cols;
  for (const auto& name : names) {
    if (!cols.emplace(name, std::vector<double>{}).second) {
      throw Error("CSV header repeats column '" + name + "'");
    }
  }
  std::vector<std::vector<double>*> order;
  for (const auto& name : names) order.push_back(&cols[name]);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t field = 0;
    const char* pos = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      const char* comma = std::find(pos, end, ',');
      if (field >= order.size()) {
        throw Error("CSV line " + std::to_string(line_no) + ": too many fields");
      }
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(pos, comma, v);
      if (ec != std::errc() || ptr != comma) {
        throw Error("CSV line " + std::to_string(line_no) + ": cannot parse '" +
                    std::string(pos, comma) + "' in column '" + names[field] + "'");
      }
      order[field]->push_back(v);
      ++field;
      if (comma == end) break;
      pos = comma + 1;
    }
    if (field != order.size()) {
      throw Error("CSV line " + std::to_string(line_no) + ": expected " +
                  std::to_string(order.size()) + " fields, got " + std::to_string(field));
    }
  }
  return cols;
}

ObservedData observed_from_columns(const CsvColumns& cols) {
  auto take = [&](const char* name) {
    auto it = cols.find(name);
    if (it == cols.end()) throw Error(std::string("CSV lacks required column '") + name + "'");
    return it->second;
  };
  return {take("d_child"), take("a_child"), take("y_parent")};
}

}  // namespace mrproxy

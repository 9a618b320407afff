#include <cmath>
#include <sstream>

#include "arraycap/capacity.hpp"
#include "arraycap/error.hpp"
#include "text_io.hpp"

namespace arraycap {

void CapacityMap::set_metadata(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

const std::string* CapacityMap::find_metadata(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

void write_capacity_map(std::ostream& out, const CapacityMap& map) {
  if (map.axis.size() != map.values.size()) throw InvalidArgument("capacity map: axis and value counts differ");
  out << "# axis=" << map.axis_name << '\n';
  for (const auto& [k, v] : map.metadata) out << "# " << k << '=' << v << '\n';
  out << "axis_value,capacity_bits\n";
  for (std::size_t i = 0; i < map.axis.size(); ++i) {
    if (!std::isfinite(map.values[i])) throw InvalidArgument("capacity map holds a non-finite value");
    out << detail::format_number(map.axis[i]) << ',' << detail::format_number(map.values[i]) << '\n';
  }
}

std::string capacity_map_csv(const CapacityMap& map) {
  std::ostringstream os;
  write_capacity_map(os, map);
  return os.str();
}

CapacityMap read_capacity_map(std::istream& in) {
  std::stringstream body;
  CapacityMap map;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        const std::string key = line.substr(2, eq - 2);
        const std::string value = line.substr(eq + 1);
        if (key == "axis")
          map.axis_name = value;
        else
          map.metadata.emplace_back(key, value);
      }
      continue;
    }
    body << line << '\n';
  }
  for (const auto& row : detail::read_csv(body, {"axis_value", "capacity_bits"}, "capacity map")) {
    const std::string ctx = "capacity map row " + std::to_string(row.line);
    map.axis.push_back(detail::parse_number(row.fields[0], ctx));
    map.values.push_back(detail::parse_number(row.fields[1], ctx));
  }
  return map;
}

}  // namespace arraycap

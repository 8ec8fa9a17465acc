#include "collatz/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

namespace collatz::io {

namespace {

/// Rethrows nlohmann/parse failures as IoError with a context prefix.
template <typename Fn>
auto guarded(const std::string& context, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& error) {
    throw IoError(context + ": " + error.what());
  }
}

std::string digest_string(std::uint64_t digest) {
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0')
      << digest;
  return out.str();
}

BigInt require_big(const std::string& text, const std::string& field) {
  const std::optional<BigInt> value = parse_big(text);
  if (!value.has_value()) {
    throw IoError("malformed integer in field " + field + ": " + text);
  }
  return *value;
}

Rational require_rational(const std::string& text, const std::string& field) {
  const std::optional<Rational> value = parse_rational(text);
  if (!value.has_value()) {
    throw IoError("malformed rational in field " + field + ": " + text);
  }
  return *value;
}

}  // namespace

Json registry_to_json(const dynamics::CycleRegistry& registry) {
  Json json;
  json["map"] = Json{{"a", registry.map().odd_multiplier().str()},
                     {"b", registry.map().odd_offset().str()},
                     {"label", registry.map().label()}};
  json["scan_bound"] = registry.scan_bound().str();
  json["step_limit"] = std::to_string(registry.limits().step_limit);
  json["value_limit"] = registry.limits().value_limit.str();
  Json cycles = Json::array();
  for (const dynamics::Cycle& cycle : registry.cycles()) {
    Json elements = Json::array();
    for (const BigInt& element : cycle.elements()) {
      elements.push_back(element.str());
    }
    cycles.push_back(std::move(elements));
  }
  json["cycles"] = std::move(cycles);
  Json escaped = Json::array();
  for (const BigInt& seed : registry.escaped_seeds()) {
    escaped.push_back(seed.str());
  }
  json["escaped"] = std::move(escaped);
  return json;
}

dynamics::CycleRegistry registry_from_json(const Json& json) {
  return guarded("registry json", [&] {
    const Json& map_json = json.at("map");
    dynamics::CollatzMap map(
        require_big(map_json.at("a").get<std::string>(), "map.a"),
        require_big(map_json.at("b").get<std::string>(), "map.b"),
        map_json.at("label").get<std::string>());
    const BigInt scan_bound =
        require_big(json.at("scan_bound").get<std::string>(), "scan_bound");
    dynamics::OrbitLimits limits;
    limits.step_limit =
        require_big(json.at("step_limit").get<std::string>(), "step_limit")
            .convert_to<std::uint64_t>();
    limits.value_limit =
        require_big(json.at("value_limit").get<std::string>(), "value_limit");
    std::vector<dynamics::Cycle> cycles;
    for (const Json& cycle_json : json.at("cycles")) {
      std::vector<BigInt> elements;
      for (const Json& element : cycle_json) {
        elements.push_back(require_big(element.get<std::string>(), "cycles"));
      }
      cycles.emplace_back(map, std::move(elements));
    }
    std::vector<BigInt> escaped;
    for (const Json& seed : json.at("escaped")) {
      escaped.push_back(require_big(seed.get<std::string>(), "escaped"));
    }
    return dynamics::CycleRegistry(map, scan_bound, limits, std::move(cycles),
                                   std::move(escaped));
  });
}

Json topology_to_json(const topology::Topology& topology) {
  Json json;
  json["carrier"] = topology.carrier().bound();
  Json neighborhoods;
  for (Point x = 1; x <= topology.carrier().bound(); ++x) {
    Json points = Json::array();
    for (Point y : topology.min_nbhd(x)) points.push_back(y);
    neighborhoods[std::to_string(x)] = std::move(points);
  }
  json["min_nbhd"] = std::move(neighborhoods);
  return json;
}

Json partition_to_json(const measurable::AtomPartition& partition) {
  Json json;
  json["carrier"] = partition.carrier().bound();
  Json atoms = Json::array();
  for (const PointSet& atom : partition.atoms()) {
    Json block = Json::array();
    for (Point x : atom) block.push_back(x);
    atoms.push_back(std::move(block));
  }
  json["atoms"] = std::move(atoms);
  return json;
}

Json measure_to_json(const measure::RationalMeasure& measure) {
  Json json;
  json["carrier"] = measure.carrier().bound();
  Json weights;
  for (const auto& [x, w] : measure.weights()) {
    weights[std::to_string(x)] = rational_string(w);
  }
  json["weights"] = std::move(weights);
  return json;
}

measure::RationalMeasure measure_from_json(const Json& json) {
  return guarded("measure json", [&] {
    topology::Carrier carrier(json.at("carrier").get<Point>());
    std::map<Point, Rational> weights;
    for (const auto& [key, value] : json.at("weights").items()) {
      weights.emplace(
          require_big(key, "weights key").convert_to<Point>(),
          require_rational(value.get<std::string>(), "weights value"));
    }
    return measure::RationalMeasure(carrier, std::move(weights));
  });
}

Json decomposition_to_json(
    const std::vector<measure::ErgodicComponent>& components) {
  Json json = Json::array();
  for (const measure::ErgodicComponent& component : components) {
    json.push_back(Json{{"cycle_min", component.cycle.min_element().str()},
                        {"weight", rational_string(component.weight)}});
  }
  return json;
}

std::uint64_t registry_digest(const dynamics::CycleRegistry& registry) {
  const std::string canonical = registry_to_json(registry).dump();
  std::uint64_t hash = 14695981039346656037ULL;
  for (const char c : canonical) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

Json report_to_json(const thermo::DichotomyReport& report,
                    std::uint64_t digest) {
  Json json;
  json["map"] = report.map_label;
  json["registry_digest"] = digest_string(digest);
  json["cycles"] = report.cycle_count;
  Json battery = Json::array();
  for (const thermo::BatteryEntry& entry : report.battery) {
    Json line;
    line["potential"] = entry.potential;
    line["pressure"] = entry.pressure_value.has_value()
                           ? Json(rational_string(*entry.pressure_value))
                           : Json(nullptr);
    Json argmax = Json::array();
    for (const BigInt& minimum : entry.argmax_minima) {
      argmax.push_back(minimum.str());
    }
    line["argmax"] = std::move(argmax);
    line["unique"] = entry.unique;
    battery.push_back(std::move(line));
  }
  json["battery"] = std::move(battery);
  json["verdict"] = report.verdict;
  return json;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return std::move(buffer).str();
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + temp.string());
    out << text;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(temp, ignored);
      throw IoError("write failed for " + temp.string());
    }
  }
  std::error_code error;
  std::filesystem::rename(temp, path, error);
  if (error) {
    std::error_code ignored;
    std::filesystem::remove(temp, ignored);
    throw IoError("cannot move " + temp.string() + " into place: " +
                  error.message());
  }
}

Json read_json(const std::filesystem::path& path) {
  return guarded("parse " + path.string(), [&] {
    return Json::parse(read_text(path));
  });
}

void write_json_atomic(const std::filesystem::path& path, const Json& json) {
  write_text_atomic(path, json.dump(2) + "\n");
}

}  // namespace collatz::io

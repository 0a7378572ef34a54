#include "isosched/schedule_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace isosched {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json copy_to_json(const CopyOp& c) {
  return {{"src", to_string(c.src)}, {"dst", to_string(c.dst)}};
}

CopyOp copy_from_json(const json& j) {
  return {buffer_ref_from_string(j.at("src").get<std::string>()),
          buffer_ref_from_string(j.at("dst").get<std::string>())};
}

}  // namespace

std::string schedule_to_json(const Schedule& s) {
  ordered_json doc;
  doc["kind"] = to_string(s.kind);
  doc["algorithm"] = to_string(s.algorithm);
  doc["d"] = s.d;
  doc["num_blocks"] = s.num_blocks;
  doc["dim_order"] = s.dim_order;
  doc["scratch_slots"] = s.scratch_slots;
  doc["block_sizes"] = s.block_sizes;

  ordered_json local = ordered_json::array();
  for (const CopyOp& c : s.local_copies) local.push_back(copy_to_json(c));
  doc["local_copies"] = local;

  ordered_json steps = ordered_json::array();
  for (const Step& step : s.steps) {
    ordered_json js;
    js["send_offset"] = step.send_offset;
    ordered_json parts = ordered_json::array();
    for (const Part& p : step.parts)
      parts.push_back({{"block", p.block},
                       {"src", to_string(p.src)},
                       {"dst", to_string(p.dst)},
                       {"size_index", p.size_index}});
    js["parts"] = parts;
    steps.push_back(std::move(js));
  }
  doc["steps"] = steps;

  ordered_json fin = ordered_json::array();
  for (const CopyOp& c : s.finalize_copies) fin.push_back(copy_to_json(c));
  doc["finalize_copies"] = fin;

  return doc.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("schedule is not valid JSON: ") + e.what());
  }

  Schedule s;
  try {
    s.kind = collective_from_string(doc.at("kind").get<std::string>());
    s.algorithm = algorithm_from_string(doc.at("algorithm").get<std::string>());
    s.d = doc.at("d").get<int>();
    s.num_blocks = doc.at("num_blocks").get<int>();
    s.dim_order = doc.at("dim_order").get<std::vector<int>>();
    s.scratch_slots = doc.at("scratch_slots").get<int>();
    s.block_sizes = doc.at("block_sizes").get<std::vector<long long>>();
    for (const json& j : doc.at("local_copies")) s.local_copies.push_back(copy_from_json(j));
    for (const json& j : doc.at("steps")) {
      Step step;
      step.send_offset = j.at("send_offset").get<Offset>();
      for (const json& jp : j.at("parts"))
        step.parts.push_back({jp.at("block").get<int>(),
                              buffer_ref_from_string(jp.at("src").get<std::string>()),
                              buffer_ref_from_string(jp.at("dst").get<std::string>()),
                              jp.at("size_index").get<int>()});
      s.steps.push_back(std::move(step));
    }
    for (const json& j : doc.at("finalize_copies"))
      s.finalize_copies.push_back(copy_from_json(j));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("schedule JSON is missing or mistypes a field: ") +
                                e.what());
  }

  if (s.d < 1) throw std::invalid_argument("schedule dimension count must be positive");
  if (s.num_blocks < 1) throw std::invalid_argument("schedule block count must be positive");
  for (const Step& step : s.steps)
    if (static_cast<int>(step.send_offset.size()) != s.d)
      throw std::invalid_argument("step send offset does not match the dimension count");
  return s;
}

Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return schedule_from_json(buf.str());
}

void save_schedule(const Schedule& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schedule file: " + path);
  out << schedule_to_json(s);
}

}  // namespace isosched

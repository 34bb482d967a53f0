#include "commflow/transcript.hpp"

#include <json.hpp>

namespace commflow {

void Transcript::add(Event e) {
  if (e.bits < 0 || e.elements < 0)
    throw std::invalid_argument("negative transcript entry");
  phase_bits_[e.phase] += e.bits;
  total_bits_ += e.bits;
  events_.push_back(std::move(e));
}

std::int64_t Transcript::phase_total(const std::string& phase) const {
  auto it = phase_bits_.find(phase);
  return it == phase_bits_.end() ? 0 : it->second;
}

void Transcript::write_csv(std::ostream& os) const {
  os << "phase,sender,receiver,elements,bits\n";
  for (const Event& e : events_) {
    os << e.phase << ',' << party_name(e.from) << ',' << party_name(e.to)
       << ',' << e.elements << ',' << e.bits << '\n';
  }
}

std::string Transcript::summary_json() const {
  nlohmann::ordered_json j;
  j["total_bits"] = total_bits_;
  nlohmann::ordered_json phases = nlohmann::ordered_json::object();
  for (const auto& [phase, bits] : phase_bits_) phases[phase] = bits;
  j["phase_bits"] = phases;
  j["events"] = events_.size();
  return j.dump(2);
}

}  // namespace commflow

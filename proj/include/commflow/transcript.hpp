#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "commflow/types.hpp"

namespace commflow {

// Ledger of every message crossing the simulated channel. Plain vector sends
// cost elements * (2L+1) bits; sparse-row sends and formula charges carry
// their own bit counts.
class Transcript {
 public:
  struct Event {
    std::string phase;
    PartyId from;
    PartyId to;
    std::int64_t elements;
    std::int64_t bits;
  };

  void add(Event e);

  const std::vector<Event>& events() const { return events_; }
  std::int64_t total_bits() const { return total_bits_; }
  const std::map<std::string, std::int64_t>& phase_bits() const {
    return phase_bits_;
  }
  std::int64_t phase_total(const std::string& phase) const;

  void write_csv(std::ostream& os) const;
  // JSON text with per-phase totals and the grand total.
  std::string summary_json() const;

 private:
  std::vector<Event> events_;
  std::map<std::string, std::int64_t> phase_bits_;
  std::int64_t total_bits_ = 0;
};

}  // namespace commflow

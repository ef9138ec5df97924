#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace lor {

// Append-only trace of ledger commands. One line per record:
//   seq|checkpoint|round|kind|payload
// Runs with equal configs produce byte-identical streams; the determinism
// acceptance check diffs these files directly. Round -1 marks records
// emitted inside a checkpoint process.
class EventLog {
 public:
  void attach(std::ostream* sink) { sink_ = sink; }

  void set_clock(std::uint64_t checkpoint, std::int32_t round) {
    checkpoint_ = checkpoint;
    round_ = round;
  }

  void emit(std::string_view kind, std::string_view payload) {
    ++sequence_;
    if (sink_ == nullptr) return;
    *sink_ << sequence_ << '|' << checkpoint_ << '|' << round_ << '|' << kind
           << '|' << payload << '\n';
  }

  std::uint64_t sequence() const { return sequence_; }
  std::uint64_t checkpoint() const { return checkpoint_; }

 private:
  std::ostream* sink_ = nullptr;
  std::uint64_t sequence_ = 0;
  std::uint64_t checkpoint_ = 0;
  std::int32_t round_ = -1;
};

}  // namespace lor

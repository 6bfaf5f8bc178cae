#pragma once

#include <cstdint>

#include "hiddentime/lattice.hpp"
#include "hiddentime/phase.hpp"

namespace hiddentime {

struct Amplitude {
  double re = 0.0;
  double im = 0.0;

  double norm2() const { return re * re + im * im; }
  friend bool operator==(const Amplitude&, const Amplitude&) = default;
};

/// Running phasor sum at one detector. Arrivals are accepted until the record
/// is closed, after which the intensity is frozen.
class DetectorRecord {
 public:
  DetectorRecord() = default;
  explicit DetectorRecord(NodeId detector) : detector_(detector) {}

  void add_arrival(Phase phase);
  void close();

  NodeId detector() const { return detector_; }
  Amplitude amplitude() const { return amplitude_; }
  double intensity() const { return intensity_; }
  std::uint64_t arrivals() const { return arrivals_; }
  bool closed() const { return closed_; }

  friend bool operator==(const DetectorRecord&, const DetectorRecord&) = default;

 private:
  NodeId detector_;
  Amplitude amplitude_;
  double intensity_ = 0.0;
  std::uint64_t arrivals_ = 0;
  bool closed_ = false;
};

/// Free-function form: returns a closed copy of `record`.
DetectorRecord close_detector(DetectorRecord record);

}  // namespace hiddentime

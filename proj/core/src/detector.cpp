#include "hiddentime/detector.hpp"

#include <cmath>
#include <string>

#include "hiddentime/error.hpp"

namespace hiddentime {

void DetectorRecord::add_arrival(Phase phase) {
  if (closed_) {
    throw Error(ErrorCode::ProtocolOrder,
                "arrival at closed detector " + std::to_string(detector_.value));
  }
  amplitude_.re += std::cos(phase.radians());
  amplitude_.im += std::sin(phase.radians());
  ++arrivals_;
}

void DetectorRecord::close() {
  if (closed_) {
    throw Error(ErrorCode::ProtocolOrder,
                "detector " + std::to_string(detector_.value) + " closed twice");
  }
  intensity_ = amplitude_.norm2();
  closed_ = true;
}

DetectorRecord close_detector(DetectorRecord record) {
  record.close();
  return record;
}

}  // namespace hiddentime

#include "apixplore/metaprops.hpp"

#include <zlib.h>

#include <cstring>
#include <stdexcept>

namespace apix {

std::string to_string(MetaProperty prop) {
  switch (prop) {
    case MetaProperty::kR1: return "MP-R-1";
    case MetaProperty::kR2: return "MP-R-2";
    case MetaProperty::kS1: return "MP-S-1";
    case MetaProperty::kS2: return "MP-S-2";
    case MetaProperty::kS3: return "MP-S-3";
    case MetaProperty::kS4: return "MP-S-4";
    case MetaProperty::kS5: return "MP-S-5";
  }
  return "MP-?";
}

MetaProperty meta_property_from_string(const std::string& text) {
  for (const MetaProperty p : all_meta_properties()) {
    if (to_string(p) == text) return p;
  }
  throw std::invalid_argument("unknown meta-property \"" + text + "\"");
}

std::vector<MetaProperty> all_meta_properties() {
  return {MetaProperty::kR1, MetaProperty::kR2, MetaProperty::kS1,
          MetaProperty::kS2, MetaProperty::kS3, MetaProperty::kS4,
          MetaProperty::kS5};
}

SequenceShape shape_constraints(MetaProperty prop) {
  SequenceShape shape;
  shape.prop = prop;
  switch (prop) {
    case MetaProperty::kR1:
      // Two repetitions are the smallest relevant count; more would shrink
      // back to two anyway.
      shape.min_len = 2;
      shape.fixed_len = true;
      shape.duplicate_all = true;
      shape.pin_ends = true;
      break;
    case MetaProperty::kR2:
      shape.min_len = 2;
      shape.pin_ends = true;
      break;
    case MetaProperty::kS5:
      shape.min_len = 2;
      shape.instrumented = true;
      shape.min_setup = 1;
      break;
    default:
      shape.min_len = 2;
      shape.instrumented = true;
      break;
  }
  return shape;
}

std::size_t state_size(const std::string& body) {
  // Pinned configuration: gzip container (windowBits 15+16), level 6,
  // memLevel 8, default strategy, and an explicit header with zeroed
  // timestamp and an "unknown" OS byte so output is platform-independent.
  z_stream stream;
  std::memset(&stream, 0, sizeof(stream));
  if (deflateInit2(&stream, 6, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("state_size: deflateInit2 failed");
  }
  gz_header header;
  std::memset(&header, 0, sizeof(header));
  header.os = 255;
  deflateSetHeader(&stream, &header);

  const auto bound = deflateBound(&stream, static_cast<uLong>(body.size()));
  std::vector<unsigned char> out(bound + 32);
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(body.data()));
  stream.avail_in = static_cast<uInt>(body.size());
  stream.next_out = out.data();
  stream.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&stream, Z_FINISH);
  const std::size_t produced = stream.total_out;
  deflateEnd(&stream);
  if (rc != Z_STREAM_END) {
    throw std::runtime_error("state_size: deflate did not finish");
  }
  return produced;
}

namespace {

bool all_responses_equal(const ExecutionTrace& trace) {
  for (std::size_t i = 1; i < trace.steps.size(); ++i) {
    if (!(trace.steps[i].observation == trace.steps[0].observation)) return false;
  }
  return true;
}

void require_snapshots(const ExecutionTrace& trace) {
  if (trace.snapshots.size() != trace.steps.size() + 1) {
    throw std::invalid_argument(
        "state property evaluated on a trace without instrumentation snapshots");
  }
}

}  // namespace

bool evaluate(MetaProperty prop, const ExecutionTrace& trace) {
  if (!trace.complete()) return false;
  if (trace.steps.empty()) return false;

  switch (prop) {
    case MetaProperty::kR1:
      return all_responses_equal(trace);
    case MetaProperty::kR2:
      return !(trace.steps.front().observation == trace.steps.back().observation);
    default:
      break;
  }

  require_snapshots(trace);
  const auto& snaps = trace.snapshots;
  const StateSnapshot& first = snaps.front();
  const StateSnapshot& last = snaps.back();
  const bool ends_equal = first.observation == last.observation;
  bool intermediate_differs = false;
  for (std::size_t i = 1; i + 1 < snaps.size(); ++i) {
    if (!(snaps[i].observation == first.observation)) {
      intermediate_differs = true;
      break;
    }
  }

  switch (prop) {
    case MetaProperty::kS1:
      return ends_equal && !intermediate_differs;
    case MetaProperty::kS2:
      return !ends_equal;
    case MetaProperty::kS3:
      return ends_equal && intermediate_differs;
    case MetaProperty::kS4:
      return !ends_equal && last.size > first.size;
    case MetaProperty::kS5: {
      // Baseline is the snapshot right after the setup prefix; the decrease
      // must be attributable to the measured body.
      const auto base = static_cast<std::size_t>(trace.setup_len);
      if (base >= snaps.size()) return false;
      const StateSnapshot& start = snaps[base];
      return !(start.observation == last.observation) && last.size < start.size;
    }
    default:
      return false;
  }
}

}  // namespace apix

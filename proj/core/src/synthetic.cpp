#include "ratebench/synthetic.hpp"

#include "ratebench/error.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <vector>

namespace ratebench {

namespace {

constexpr std::uint64_t kSeed = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kMul = 6364136223846793005ull;
constexpr std::uint64_t kStride = 4099;  // odd prime: coprime to every power-of-two buffer

struct SpinState {
  std::uint64_t x = kSeed;
  double acc = 0.0;
};

void spin(SpinState& s, std::uint64_t units) {
  std::uint64_t x = s.x;
  double acc = s.acc;
  for (std::uint64_t i = 0; i < units; ++i) {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    acc = acc * 0.999 + static_cast<double>(x >> 11) * 0x1p-53;
  }
  s.x = x;
  s.acc = acc;
}

struct StreamState {
  std::vector<std::uint64_t> buf;
  std::size_t idx = 0;
  std::uint64_t sum = 0;
};

StreamState make_stream(std::uint64_t mib) {
  StreamState s;
  s.buf.resize(static_cast<std::size_t>(mib) * (1u << 20) / sizeof(std::uint64_t));
  for (std::size_t i = 0; i < s.buf.size(); ++i) s.buf[i] = i * kSeed;
  return s;
}

void stream(StreamState& s, std::uint64_t units, std::uint64_t base) {
  const std::size_t n = s.buf.size();
  std::size_t idx = s.idx;
  std::uint64_t sum = s.sum;
  for (std::uint64_t i = 0; i < units; ++i) {
    idx += kStride;
    if (idx >= n) idx %= n;
    std::uint64_t v = s.buf[idx] * kMul + (base + i);
    s.buf[idx] = v;
    sum ^= v + (sum << 6) + (sum >> 2);
  }
  s.idx = idx;
  s.sum = sum;
}

}  // namespace

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::spin: return "spin";
    case SynthKind::stream: return "stream";
    case SynthKind::mixed: return "mixed";
  }
  return "spin";
}

SynthKind parse_synth_kind(std::string_view text) {
  if (text == "spin") return SynthKind::spin;
  if (text == "stream") return SynthKind::stream;
  if (text == "mixed") return SynthKind::mixed;
  throw ConfigError("unknown synthetic kind '" + std::string(text) + "' (spin, stream, mixed)");
}

SynthResult run_synthetic(const SynthParams& params) {
  if (params.work_units == 0) throw ConfigError("work_units must be positive");
  if (params.kind != SynthKind::spin && params.buffer_mib == 0) {
    throw ConfigError("buffer_mib must be positive");
  }
  SynthResult r;
  switch (params.kind) {
    case SynthKind::spin: {
      SpinState s;
      spin(s, params.work_units);
      r.checksum = s.x ^ std::bit_cast<std::uint64_t>(s.acc);
      r.mean = s.acc * 0.001;
      break;
    }
    case SynthKind::stream: {
      StreamState s = make_stream(params.buffer_mib);
      stream(s, params.work_units, 0);
      r.checksum = s.sum;
      r.mean = static_cast<double>(s.sum >> 11) * 0x1p-53;
      break;
    }
    case SynthKind::mixed: {
      // Eight alternating phases; the first phase absorbs the remainder.
      SpinState sp;
      StreamState st = make_stream(params.buffer_mib);
      const std::uint64_t phase = params.work_units / 8;
      std::uint64_t done = 0;
      for (int p = 0; p < 8; ++p) {
        std::uint64_t units = p == 0 ? params.work_units - 7 * phase : phase;
        if (p % 2 == 0) {
          spin(sp, units);
        } else {
          stream(st, units, done);
        }
        done += units;
      }
      r.checksum = sp.x ^ std::bit_cast<std::uint64_t>(sp.acc) ^ st.sum;
      r.mean = sp.acc * 0.001;
      break;
    }
  }
  return r;
}

std::string synthetic_output(const SynthParams& params, const SynthResult& result) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "# ratebench synthetic output v1\nkind %s\nunits %llu\nchecksum %016llx\nmean %.12e\n",
                std::string(to_string(params.kind)).c_str(),
                static_cast<unsigned long long>(params.work_units),
                static_cast<unsigned long long>(result.checksum), result.mean);
  return buf;
}

int synth_main(const SynthParams& params, const std::filesystem::path& out_file) {
  SynthResult r = run_synthetic(params);
  std::ofstream out(out_file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + out_file.string());
  out << synthetic_output(params, r);
  out.flush();
  if (!out) throw IoError("cannot write " + out_file.string());
  return 0;
}

}  // namespace ratebench

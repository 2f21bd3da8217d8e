#include "rnf/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

namespace rnf {

namespace {

using Kind = PgmError::Kind;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError(Kind::open_failed, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

class HeaderReader {
public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const unsigned char ch = static_cast<unsigned char>(bytes_[pos_]);
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Returns false at end of input; throws on a non-digit token.
  bool next_uint(long& value, Kind on_error) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) return false;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (pos_ == start || pos_ - start > 9) throw PgmError(on_error, "PGM: expected an unsigned integer");
    value = std::stol(bytes_.substr(start, pos_ - start));
    return true;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance() noexcept { ++pos_; }
  bool at_space() const {
    return pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]));
  }

private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

PgmImage parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw PgmError(Kind::unsupported_magic, "PGM: unsupported magic number (expected P2 or P5)");
  }
  const bool binary = bytes[1] == '5';
  HeaderReader reader(bytes);
  reader.advance();
  reader.advance();
  if (!reader.at_space() && reader.pos() < bytes.size() && bytes[reader.pos()] != '#') {
    throw PgmError(Kind::unsupported_magic, "PGM: unsupported magic number (expected P2 or P5)");
  }

  long width = 0;
  long height = 0;
  long maxval = 0;
  if (!reader.next_uint(width, Kind::malformed_header) ||
      !reader.next_uint(height, Kind::malformed_header) ||
      !reader.next_uint(maxval, Kind::malformed_header)) {
    throw PgmError(Kind::malformed_header, "PGM: header ends early");
  }
  if (width <= 0 || height <= 0) throw PgmError(Kind::malformed_header, "PGM: zero image size");
  if (maxval < 1 || maxval > 65535) throw PgmError(Kind::malformed_header, "PGM: maxval outside 1..65535");

  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);
  PgmImage img{Grid(w, h), static_cast<int>(maxval)};
  const std::size_t count = w * h;

  if (binary) {
    if (!reader.at_space()) throw PgmError(Kind::malformed_header, "PGM: missing whitespace after maxval");
    const std::size_t start = reader.pos() + 1;
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    if (bytes.size() < start + count * sample_bytes) {
      throw PgmError(Kind::truncated, "PGM: payload is truncated");
    }
    for (std::size_t i = 0; i < count; ++i) {
      long v = 0;
      if (sample_bytes == 1) {
        v = static_cast<unsigned char>(bytes[start + i]);
      } else {
        v = (static_cast<unsigned char>(bytes[start + 2 * i]) << 8) |
            static_cast<unsigned char>(bytes[start + 2 * i + 1]);
      }
      if (v > maxval) throw PgmError(Kind::malformed_payload, "PGM: sample exceeds maxval");
      img.pixels[i] = static_cast<double>(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long v = 0;
      if (!reader.next_uint(v, Kind::malformed_payload)) {
        throw PgmError(Kind::truncated, "PGM: payload is truncated");
      }
      if (v > maxval) throw PgmError(Kind::malformed_payload, "PGM: sample exceeds maxval");
      img.pixels[i] = static_cast<double>(v);
    }
  }
  return img;
}

PgmImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

std::string encode_pgm(const Grid& grid, int maxval) {
  if (maxval < 1 || maxval > 65535) throw std::invalid_argument("write_pgm: maxval outside 1..65535");
  if (grid.empty()) throw std::invalid_argument("write_pgm: empty grid");
  std::string out = "P5\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) +
                    "\n" + std::to_string(maxval) + "\n";
  const bool wide = maxval > 255;
  out.reserve(out.size() + grid.size() * (wide ? 2 : 1));
  for (double v : grid.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("write_pgm: non-finite sample");
    const auto s = static_cast<unsigned>(std::clamp(std::round(v), 0.0, static_cast<double>(maxval)));
    if (wide) out.push_back(static_cast<char>((s >> 8) & 0xFF));
    out.push_back(static_cast<char>(s & 0xFF));
  }
  return out;
}

void write_pgm(const Grid& grid, const std::filesystem::path& path, int maxval) {
  const std::string bytes = encode_pgm(grid, maxval);
  try {
    write_file(path, bytes);
  } catch (const IoError& e) {
    throw PgmError(Kind::write_failed, e.what());
  }
}

void write_mask_pgm(const Mask& mask, const std::filesystem::path& path) {
  Grid g(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.bits.size(); ++i) g[i] = mask.bits[i] ? 255.0 : 0.0;
  write_pgm(g, path, 255);
}

Mask read_mask_pgm(const std::filesystem::path& path) {
  const PgmImage img = read_pgm(path);
  Mask m(img.pixels.width(), img.pixels.height());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) m.bits[i] = img.pixels[i] != 0.0 ? 1 : 0;
  return m;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_trajectory(const Trajectory& traj, TrajectoryFormat format) {
  std::ostringstream out;
  const std::size_t q = traj.levels.empty() ? 0 : traj.levels.front().size();
  if (format == TrajectoryFormat::csv) {
    out << "step,t,tau,inner_iters,energy";
    for (std::size_t j = 1; j <= q; ++j) out << ",c_" << j;
    out << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
      out << traj.steps[i] << ',' << format_real(traj.times[i]) << ',' << format_real(traj.taus[i])
          << ',' << traj.inner_iters[i] << ',' << format_real(traj.energies[i]);
      for (double c : traj.levels[i]) out << ',' << format_real(c);
      out << '\n';
    }
    return out.str();
  }

  auto real_array = [&](const std::vector<double>& v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_real(v[i]);
    out << ']';
  };
  auto int_array = [&](const std::vector<int>& v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << ']';
  };
  out << "{\"termination\":\"" << to_string(traj.termination) << "\",\"total_steps\":" << traj.total_steps
      << ",\"steps\":";
  int_array(traj.steps);
  out << ",\"times\":";
  real_array(traj.times);
  out << ",\"taus\":";
  real_array(traj.taus);
  out << ",\"inner_iters\":";
  int_array(traj.inner_iters);
  out << ",\"energies\":";
  real_array(traj.energies);
  out << ",\"levels\":[";
  for (std::size_t i = 0; i < traj.levels.size(); ++i) {
    if (i) out << ',';
    real_array(traj.levels[i]);
  }
  out << "]}\n";
  return out.str();
}

void export_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                       TrajectoryFormat format) {
  write_file(path, format_trajectory(traj, format));
}

Trajectory parse_trajectory_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Trajectory t;
    const std::string term = j.at("termination").get<std::string>();
    if (term == "energy_stabilized") {
      t.termination = Termination::energy_stabilized;
    } else if (term == "max_steps") {
      t.termination = Termination::max_steps;
    } else {
      throw IoError("trajectory JSON: unknown termination '" + term + "'");
    }
    t.total_steps = j.at("total_steps").get<int>();
    t.steps = j.at("steps").get<std::vector<int>>();
    t.times = j.at("times").get<std::vector<double>>();
    t.taus = j.at("taus").get<std::vector<double>>();
    t.inner_iters = j.at("inner_iters").get<std::vector<int>>();
    t.energies = j.at("energies").get<std::vector<double>>();
    t.levels = j.at("levels").get<std::vector<std::vector<double>>>();
    const std::size_t n = t.times.size();
    if (t.steps.size() != n || t.taus.size() != n || t.inner_iters.size() != n ||
        t.energies.size() != n || t.levels.size() != n) {
      throw IoError("trajectory JSON: arrays differ in length");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("trajectory JSON: ") + e.what());
  }
}

}  // namespace rnf

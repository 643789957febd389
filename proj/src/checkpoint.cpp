#include "alpha_fluids/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace alfl {

namespace {

constexpr char kMagic[4] = {'A', 'L', 'F', 'L'};
constexpr std::size_t kHeaderBytes = 104;

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  template <class U>
  void le(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) buf_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  const std::vector<unsigned char>& data() const { return buf_; }

 private:
  std::vector<unsigned char> buf_;
};

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& b) : buf_(b) {}
  template <class U>
  U le() {
    need(sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(buf_[pos_ + i]) << (8 * i));
    pos_ += sizeof(U);
    return v;
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  void bytes(void* p, std::size_t n) {
    need(n);
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (buf_.size() - pos_ < n) throw CheckpointError("truncated checkpoint");
  }
  const std::vector<unsigned char>& buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& c) {
  if (c.tag.size() > 16) throw CheckpointError("experiment tag longer than 16 bytes");
  if (c.payload.size() != static_cast<std::size_t>(c.rank) * c.nx * c.ny)
    throw CheckpointError("payload length does not match rank * nx * ny");
  Writer w;
  w.bytes(kMagic, 4);
  w.le<std::uint32_t>(kCheckpointVersion);
  char tag[16] = {};
  std::memcpy(tag, c.tag.data(), c.tag.size());
  w.bytes(tag, 16);
  w.le<std::uint32_t>(c.nx);
  w.le<std::uint32_t>(c.ny);
  for (double v : {c.lx, c.ly, c.alpha, c.nu, c.t, c.mean_velocity.x, c.mean_velocity.y}) w.f64(v);
  w.le<std::uint32_t>(c.rank);
  w.le<std::uint32_t>(0);
  w.le<std::uint64_t>(c.payload.size());
  for (const Complex& z : c.payload) {
    w.f64(z.real());
    w.f64(z.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(w.data().data()), static_cast<std::streamsize>(w.data().size()));
  out.close();
  if (out.fail()) throw CheckpointError("write to '" + path + "' failed");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path + "'");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw CheckpointError("'" + path + "' is not a checkpoint (bad magic)");
  if (bytes.size() < kHeaderBytes) throw CheckpointError("truncated checkpoint header");
  Reader r(bytes);
  char magic[4];
  r.bytes(magic, 4);
  const auto version = r.le<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  Checkpoint c;
  char tag[17] = {};
  r.bytes(tag, 16);
  c.tag = tag;
  c.nx = r.le<std::uint32_t>();
  c.ny = r.le<std::uint32_t>();
  c.lx = r.f64();
  c.ly = r.f64();
  c.alpha = r.f64();
  c.nu = r.f64();
  c.t = r.f64();
  c.mean_velocity.x = r.f64();
  c.mean_velocity.y = r.f64();
  c.rank = r.le<std::uint32_t>();
  r.le<std::uint32_t>();
  const auto count = r.le<std::uint64_t>();
  if (count != static_cast<std::uint64_t>(c.rank) * c.nx * c.ny)
    throw CheckpointError("payload count " + std::to_string(count) + " does not match rank * nx * ny");
  if (r.remaining() != count * 16)
    throw CheckpointError(r.remaining() < count * 16 ? "truncated checkpoint payload" : "trailing bytes after payload");
  c.payload.resize(count);
  for (auto& z : c.payload) {
    const double re = r.f64();
    z = Complex(re, r.f64());
  }
  return c;
}

Checkpoint checkpoint_from_state(const VorticityState& s, const std::string& tag, double nu) {
  const auto& g = s.grid();
  Checkpoint c;
  c.tag = tag;
  c.nx = static_cast<std::uint32_t>(g.nx());
  c.ny = static_cast<std::uint32_t>(g.ny());
  c.lx = g.lx();
  c.ly = g.ly();
  c.alpha = s.alpha().value();
  c.nu = nu;
  c.t = s.t();
  c.mean_velocity = s.mean_velocity();
  c.rank = 1;
  c.payload.assign(s.q().coeffs().begin(), s.q().coeffs().end());
  return c;
}

VorticityState state_from_checkpoint(const Checkpoint& c) {
  if (c.rank != 1) throw CheckpointError("expected a scalar (rank 1) checkpoint");
  const TorusGrid2D g(static_cast<int>(c.nx), static_cast<int>(c.ny), c.lx, c.ly);
  ScalarField q(g, c.payload);
  return VorticityState(std::move(q), AlphaParam(c.alpha), c.t, c.mean_velocity);
}

}  // namespace alfl

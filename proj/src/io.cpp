#include "bitprobe/io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace bitprobe::io {

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

std::uint64_t get_u64(std::istream& is) {
  char buf[8];
  is.read(buf, 8);
  if (!is) throw CorruptionError("file truncated while reading a 64-bit field");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}

void write_header(std::ostream& os, const char magic[4], const SchemeParams& p) {
  os.write(magic, 4);
  const char version = static_cast<char>(kFormatVersion);
  const char kind = static_cast<char>(p.kind);
  os.write(&version, 1);
  os.write(&kind, 1);
  put_u64(os, p.m);
  put_u64(os, p.n);
  put_u64(os, p.t);
  put_u64(os, p.s);
  put_u64(os, p.total_bits);
  put_u64(os, p.seed);
}

SchemeParams read_header(std::istream& is, const char magic[4]) {
  char got[4];
  is.read(got, 4);
  if (!is || std::memcmp(got, magic, 4) != 0) throw CorruptionError("bad file magic");
  char version = 0, kind = 0;
  is.read(&version, 1);
  is.read(&kind, 1);
  if (!is) throw CorruptionError("file truncated in header");
  if (static_cast<std::uint8_t>(version) != kFormatVersion)
    throw CorruptionError("unsupported format version");
  if (kind < 0 || kind > 4) throw CorruptionError("unknown scheme kind byte");
  SchemeParams p;
  p.kind = static_cast<SchemeKind>(kind);
  p.m = get_u64(is);
  p.n = get_u64(is);
  p.t = get_u64(is);
  p.s = get_u64(is);
  p.total_bits = get_u64(is);
  p.seed = get_u64(is);
  p.validate();
  return p;
}

std::uint64_t row_count(const SchemeParams& p) {
  switch (p.kind) {
    case SchemeKind::CharVector: return 0;
    case SchemeKind::TwoProbe:
    case SchemeKind::ThreeProbe: return p.m;
    case SchemeKind::NonAdaptive:
    case SchemeKind::Adaptive: return p.m + p.n;  // padded universe
  }
  return 0;
}

std::uint64_t row_width(const SchemeParams& p) {
  switch (p.kind) {
    case SchemeKind::CharVector: return 0;
    case SchemeKind::TwoProbe: return 3;
    case SchemeKind::ThreeProbe: return 7;
    case SchemeKind::NonAdaptive: return p.t;
    case SchemeKind::Adaptive: {
      const auto sp = AdaptiveSplit::for_t(p.t);
      return sp.t1 + sp.alpha;
    }
  }
  return 0;
}

}  // namespace

void save_scheme(const Scheme& scheme, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SchemeError("cannot open " + path + " for writing");
  const auto& p = scheme.params();
  write_header(os, kSchemeMagic, p);
  switch (scheme.kind()) {
    case SchemeKind::CharVector: break;
    case SchemeKind::TwoProbe:
      for (const auto& tr : scheme.two_probe().triples) {
        put_u64(os, tr.first);
        put_u64(os, tr.on0);
        put_u64(os, tr.on1);
      }
      break;
    case SchemeKind::ThreeProbe: {
      const auto& g = scheme.three_probe();
      for (std::uint64_t u = 0; u < g.universe; ++u)
        for (std::size_t h = 0; h < g.blocks(); ++h) put_u64(os, g.neighbor(u, h));
      break;
    }
    case SchemeKind::NonAdaptive: {
      const auto& g = scheme.nonadaptive();
      for (std::uint64_t u = 0; u < g.universe; ++u)
        for (unsigned i = 0; i < g.t; ++i) put_u64(os, g.neighbor(u, i));
      break;
    }
    case SchemeKind::Adaptive: {
      const auto& pair = scheme.adaptive();
      for (std::uint64_t u = 0; u < pair.g1.universe; ++u) {
        for (unsigned i = 0; i < pair.g1.t; ++i) put_u64(os, pair.g1.neighbor(u, i));
        for (std::size_t h = 0; h < pair.g2.blocks(); ++h) put_u64(os, pair.g2.neighbor(u, h));
      }
      break;
    }
  }
  if (!os) throw SchemeError("write failed for " + path);
}

Scheme load_scheme(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SchemeError("cannot open " + path);
  const auto p = read_header(is, kSchemeMagic);
  const std::uint64_t rows = row_count(p);
  const std::uint64_t width = row_width(p);
  std::vector<std::uint64_t> data(rows * width);
  for (auto& v : data) v = get_u64(is);

  switch (p.kind) {
    case SchemeKind::CharVector: return Scheme::char_vector(p.m, p.n, p.seed);
    case SchemeKind::TwoProbe: {
      TwoProbeQueryGraph g;
      g.s = p.s;
      g.triples.resize(p.m);
      for (std::uint64_t u = 0; u < p.m; ++u)
        g.triples[u] = {data[3 * u], data[3 * u + 1], data[3 * u + 2]};
      return Scheme(p, std::move(g));
    }
    case SchemeKind::ThreeProbe: {
      AdaptiveProbeGraph g;
      g.depth = 3;
      g.s = p.s;
      g.universe = p.m;
      g.nbr = std::move(data);
      return Scheme(p, std::move(g));
    }
    case SchemeKind::NonAdaptive: {
      NonAdaptiveProbeGraph g;
      g.t = static_cast<unsigned>(p.t);
      g.s = p.s;
      g.universe = p.m + p.n;
      g.nbr = std::move(data);
      return Scheme(p, std::move(g));
    }
    case SchemeKind::Adaptive: {
      const auto sp = AdaptiveSplit::for_t(p.t);
      AdaptivePairGraph pair;
      pair.g1.t = sp.t1;
      pair.g1.s = p.s;
      pair.g1.universe = p.m + p.n;
      pair.g2.depth = sp.t2;
      pair.g2.s = p.s;
      pair.g2.universe = p.m + p.n;
      const std::uint64_t w = sp.t1 + sp.alpha;
      pair.g1.nbr.resize(pair.g1.universe * sp.t1);
      pair.g2.nbr.resize(pair.g2.universe * sp.alpha);
      for (std::uint64_t u = 0; u < pair.g1.universe; ++u) {
        for (unsigned i = 0; i < sp.t1; ++i) pair.g1.nbr[u * sp.t1 + i] = data[u * w + i];
        for (std::uint64_t h = 0; h < sp.alpha; ++h)
          pair.g2.nbr[u * sp.alpha + h] = data[u * w + sp.t1 + h];
      }
      return Scheme(p, std::move(pair));
    }
  }
  throw CorruptionError("unreachable kind");
}

void save_memory(const BitMemory& memory, const SchemeParams& params, const std::string& path) {
  if (memory.size() != params.total_bits)
    throw std::invalid_argument("save_memory: length does not match params");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SchemeError("cannot open " + path + " for writing");
  write_header(os, kMemoryMagic, params);
  const auto bytes = memory.to_bytes();
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw SchemeError("write failed for " + path);
}

MemoryFile load_memory(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SchemeError("cannot open " + path);
  MemoryFile mf;
  mf.params = read_header(is, kMemoryMagic);
  std::vector<std::uint8_t> bytes((mf.params.total_bits + 7) / 8);
  is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!is) throw CorruptionError("memory payload truncated");
  mf.memory = BitMemory::from_bytes(bytes, mf.params.total_bits);
  return mf;
}

}  // namespace bitprobe::io

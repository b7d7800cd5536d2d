#include "vxf/manifest.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <tuple>

#include <json.hpp>

#include "vxf/errors.hpp"

namespace vxf {

namespace {

// FIPS 180-4 SHA-256.
struct Sha256 {
  std::array<std::uint32_t, 8> state = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                                        0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
  std::array<std::uint8_t, 64> buffer{};
  std::uint64_t total = 0;
  std::size_t buffered = 0;

  static std::uint32_t rotr(std::uint32_t v, int n) { return (v >> n) | (v << (32 - n)); }

  void process(const std::uint8_t* chunk) {
    static constexpr std::uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i) {
      w[i] = (std::uint32_t(chunk[4 * i]) << 24) | (std::uint32_t(chunk[4 * i + 1]) << 16) |
             (std::uint32_t(chunk[4 * i + 2]) << 8) | std::uint32_t(chunk[4 * i + 3]);
    }
    for (int i = 16; i < 64; ++i) {
      std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, h] =
        std::tuple(state[0], state[1], state[2], state[3], state[4], state[5], state[6], state[7]);
    for (int i = 0; i < 64; ++i) {
      std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      std::uint32_t ch = (e & f) ^ (~e & g);
      std::uint32_t temp1 = h + s1 + ch + k[i] + w[i];
      std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      std::uint32_t temp2 = s0 + maj;
      h = g;
      g = f;
      f = e;
      e = d + temp1;
      d = c;
      c = b;
      b = a;
      a = temp1 + temp2;
    }
    state[0] += a;
    state[1] += b;
    state[2] += c;
    state[3] += d;
    state[4] += e;
    state[5] += f;
    state[6] += g;
    state[7] += h;
  }

  void update(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const std::uint8_t*>(data);
    total += len;
    while (len > 0) {
      std::size_t take = std::min(len, buffer.size() - buffered);
      std::memcpy(buffer.data() + buffered, bytes, take);
      buffered += take;
      bytes += take;
      len -= take;
      if (buffered == buffer.size()) {
        process(buffer.data());
        buffered = 0;
      }
    }
  }

  std::string hex_digest() {
    std::uint64_t bit_len = total * 8;
    std::uint8_t pad = 0x80;
    update(&pad, 1);
    std::uint8_t zero = 0;
    while (buffered != 56) update(&zero, 1);
    std::uint8_t len_bytes[8];
    for (int i = 0; i < 8; ++i) len_bytes[i] = std::uint8_t(bit_len >> (56 - 8 * i));
    update(len_bytes, 8);

    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (std::uint32_t word : state) {
      for (int shift = 28; shift >= 0; shift -= 4) {
        out.push_back(digits[(word >> shift) & 0xF]);
      }
    }
    return out;
  }
};

nlohmann::json to_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["tool"] = manifest.tool;
  j["version"] = manifest.version;
  j["command"] = manifest.command;
  j["parameters"] = manifest.parameters;
  auto files = [](const std::vector<FileDigest>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : list) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
  };
  j["inputs"] = files(manifest.inputs);
  j["outputs"] = files(manifest.outputs);
  return j;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 hash;
  hash.update(bytes.data(), bytes.size());
  return hash.hex_digest();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(errc::input_not_found, "cannot open for hashing: " + path.string(),
                {{"path", path.string()}});
  }
  Sha256 hash;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    hash.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return hash.hex_digest();
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::io_error, "cannot write manifest: " + path.string());
  }
  out << to_json(manifest).dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::input_not_found, "manifest not found: " + path.string(),
                {{"path", path.string()}});
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::parse_error, "malformed manifest " + path.string() + ": " + e.what());
  }
  RunManifest manifest;
  manifest.tool = j.value("tool", "");
  manifest.version = j.value("version", "");
  manifest.command = j.value("command", "");
  if (j.contains("parameters")) {
    for (auto& [key, value] : j["parameters"].items()) {
      manifest.parameters[key] = value.get<std::string>();
    }
  }
  auto files = [&](const char* key) {
    std::vector<FileDigest> list;
    if (!j.contains(key)) return list;
    for (const auto& f : j[key]) {
      list.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    }
    return list;
  };
  manifest.inputs = files("inputs");
  manifest.outputs = files("outputs");
  return manifest;
}

std::vector<std::string> check_manifest(const std::filesystem::path& path) {
  RunManifest manifest = read_manifest(path);
  std::vector<std::string> mismatches;
  auto check = [&](const std::vector<FileDigest>& list, const char* kind) {
    for (const auto& f : list) {
      std::string actual;
      try {
        actual = sha256_file(f.path);
      } catch (const Error&) {
        mismatches.push_back(std::string(kind) + " " + f.path + ": missing");
        continue;
      }
      if (actual != f.sha256) {
        mismatches.push_back(std::string(kind) + " " + f.path + ": digest " + actual +
                             " != recorded " + f.sha256);
      }
    }
  };
  check(manifest.inputs, "input");
  check(manifest.outputs, "output");
  return mismatches;
}

}  // namespace vxf

#include "tagsim/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>

#include "tagsim/errors.hpp"
#include "tagsim/version.hpp"

namespace tagsim {

namespace {

std::string hex(const unsigned char* bytes, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(kDigits[bytes[i] >> 4]);
    out.push_back(kDigits[bytes[i] & 0xF]);
  }
  return out;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr);
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const char* data, std::size_t n) {
    EVP_DigestUpdate(ctx_, data, n);
  }

  std::string finish() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, digest.data(), &len);
    return hex(digest.data(), len);
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_bytes(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.finish();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Sha256 h;
  char chunk[1 << 16];
  while (in) {
    in.read(chunk, sizeof(chunk));
    h.update(chunk, static_cast<std::size_t>(in.gcount()));
  }
  return h.finish();
}

nlohmann::json Manifest::to_json() const {
  nlohmann::json inputs_json = nlohmann::json::array();
  for (const auto& [name, digest] : inputs) {
    inputs_json.push_back({{"name", name}, {"sha256", digest}});
  }
  return nlohmann::json{
      {"tool", kToolName},
      {"version", kVersion},
      {"command", command},
      {"config", config},
      {"inputs", std::move(inputs_json)},
      {"data", data},
  };
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

}  // namespace tagsim

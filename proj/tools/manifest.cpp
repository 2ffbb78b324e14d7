#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "subflow/error.hpp"
#include "subflow/version.hpp"

namespace subflow::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ConfigError, "cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::filesystem::path manifest_path(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".manifest.json");
}

void Manifest::write(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["version"] = kVersion;
  j["config"] = config;
  j["inputs"] = inputs;
  if (!report.empty()) j["report"] = report;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& p : outputs) {
    outs.push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}});
  }
  j["outputs"] = outs;
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::ConfigError, "cannot write " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace subflow::cli

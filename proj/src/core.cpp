#include "kogate/core.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>

namespace kogate {
namespace {

std::string escape_value(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string digest_with(const EVP_MD* md, std::string_view bytes,
                        unsigned expected_len) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> buf{};
  unsigned len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, md, nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, buf.data(), &len) != 1 || len != expected_len) {
    EVP_MD_CTX_free(ctx);
    throw StorageError("digest computation failed");
  }
  EVP_MD_CTX_free(ctx);
  return std::string(reinterpret_cast<char*>(buf.data()), len);
}

std::string to_hex(std::string_view raw) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(raw.size() * 2);
  for (unsigned char c : raw) {
    out += kHex[c >> 4];
    out += kHex[c & 0x0f];
  }
  return out;
}

}  // namespace

std::string to_string(VerificationLevel level) {
  switch (level) {
    case VerificationLevel::Unverified: return "unverified";
    case VerificationLevel::Institutional: return "institutional";
    case VerificationLevel::Verified: return "verified";
  }
  throw ValidationError("unknown verification level");
}

std::string to_string(ObjectStatus status) {
  switch (status) {
    case ObjectStatus::Active: return "active";
    case ObjectStatus::Archived: return "archived";
    case ObjectStatus::Deleted: return "deleted";
  }
  throw ValidationError("unknown object status");
}

VerificationLevel verification_level_from_string(std::string_view s) {
  if (s == "unverified") return VerificationLevel::Unverified;
  if (s == "institutional") return VerificationLevel::Institutional;
  if (s == "verified") return VerificationLevel::Verified;
  throw ValidationError("unknown verification level: " + std::string(s));
}

ObjectStatus object_status_from_string(std::string_view s) {
  if (s == "active") return ObjectStatus::Active;
  if (s == "archived") return ObjectStatus::Archived;
  if (s == "deleted") return ObjectStatus::Deleted;
  throw ValidationError("unknown object status: " + std::string(s));
}

std::string canonical_text(std::string_view concept_id, std::string_view content,
                           std::string_view source_id, std::int64_t timestamp) {
  if (concept_id.empty()) throw ValidationError("canonical_text: empty concept_id");
  if (content.empty()) throw ValidationError("canonical_text: empty content");
  if (source_id.empty()) throw ValidationError("canonical_text: empty source_id");
  if (timestamp < 0) throw ValidationError("canonical_text: negative timestamp");
  // Fields in sorted-by-name order; the format is frozen (docs/FORMATS.md).
  std::string text;
  text += "concept_id=" + escape_value(concept_id) + "\n";
  text += "content=" + escape_value(content) + "\n";
  text += "source_id=" + escape_value(source_id) + "\n";
  text += "timestamp=" + std::to_string(timestamp) + "\n";
  return text;
}

std::string canonical_id(std::string_view concept_id, std::string_view content,
                         std::string_view source_id, std::int64_t timestamp) {
  return sha256_hex(canonical_text(concept_id, content, source_id, timestamp));
}

std::string canonical_id(const KnowledgeObject& ko) {
  return canonical_id(ko.concept_id, ko.content, ko.provenance.source_id,
                      ko.provenance.timestamp);
}

std::string sha256_hex(std::string_view bytes) {
  return to_hex(digest_with(EVP_sha256(), bytes, 32));
}

std::vector<std::uint8_t> md5_digest(std::string_view bytes) {
  const std::string raw = digest_with(EVP_md5(), bytes, 16);
  return std::vector<std::uint8_t>(raw.begin(), raw.end());
}

std::vector<std::string> validate(const KnowledgeObject& ko,
                                  std::size_t expected_dim) {
  std::vector<std::string> violations;
  if (ko.status == ObjectStatus::Deleted) {
    // Tombstones expose id + status only.
    if (ko.id.empty()) violations.push_back("tombstone has empty id");
    if (!ko.content.empty() || !ko.embedding.empty() ||
        !ko.provenance.source_id.empty() || ko.salience.has_value()) {
      violations.push_back("tombstone retains purged fields");
    }
    return violations;
  }
  if (ko.id.empty()) violations.push_back("empty id");
  if (ko.concept_id.empty()) violations.push_back("empty concept_id");
  if (ko.content.empty()) violations.push_back("empty content");
  if (ko.provenance.source_id.empty()) violations.push_back("empty source_id");
  if (ko.provenance.timestamp < 0) violations.push_back("negative timestamp");
  if (ko.provenance.reputation < 0.0 || ko.provenance.reputation > 1.0) {
    violations.push_back("reputation outside [0,1]");
  }
  if (ko.embedding.size() != expected_dim) {
    violations.push_back("embedding has dimension " +
                         std::to_string(ko.embedding.size()) + ", expected " +
                         std::to_string(expected_dim));
  } else {
    double norm_sq = 0.0;
    for (double x : ko.embedding) norm_sq += x * x;
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-6) {
      violations.push_back("embedding is not unit-norm");
    }
  }
  if (!ko.id.empty() && !ko.concept_id.empty() && !ko.content.empty() &&
      !ko.provenance.source_id.empty() && ko.provenance.timestamp >= 0 &&
      ko.id != canonical_id(ko)) {
    violations.push_back("id does not match canonical content hash");
  }
  if (ko.salience.has_value()) {
    const auto& s = *ko.salience;
    for (double v : {s.rep, s.nov, s.src, s.composite}) {
      if (v < -1e-12 || v > 1.0 + 1e-12) {
        violations.push_back("salience component outside [0,1]");
        break;
      }
    }
  }
  return violations;
}

KnowledgeObject make_tombstone(std::string id) {
  KnowledgeObject t;
  t.id = std::move(id);
  t.status = ObjectStatus::Deleted;
  return t;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError("cosine: dimension mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ValidationError("cosine: zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace kogate

#include "tagsim/model.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <string>

#include "tagsim/util.hpp"

namespace tagsim {

namespace {

bool is_ascii_only(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

/// NFC via ICU with preflighted buffers. Any conversion failure (which only
/// happens on invalid UTF-8) falls back to the untouched input.
std::string nfc(std::string_view in) {
  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* norm = unorm2_getNFCInstance(&status);
  if (U_FAILURE(status)) return std::string(in);

  // UTF-8 -> UTF-16. A UTF-16 unit count never exceeds the UTF-8 byte count.
  // Capacities are passed as exact sizes; the unterminated-output warning
  // ICU raises in that case is a success code.
  std::u16string u16(in.size(), u'\0');
  int32_t len16 = 0;
  u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &len16,
                in.data(), static_cast<int32_t>(in.size()), &status);
  if (U_FAILURE(status)) return std::string(in);
  u16.resize(static_cast<std::size_t>(len16));

  status = U_ZERO_ERROR;
  if (unorm2_quickCheck(norm, u16.data(), len16, &status) == UNORM_YES &&
      U_SUCCESS(status)) {
    return std::string(in);  // already composed
  }

  status = U_ZERO_ERROR;
  int32_t need = unorm2_normalize(norm, u16.data(), len16, nullptr, 0, &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
    return std::string(in);
  }
  status = U_ZERO_ERROR;
  std::u16string out16(static_cast<std::size_t>(need), u'\0');
  need = unorm2_normalize(norm, u16.data(), len16, out16.data(),
                          static_cast<int32_t>(out16.size()), &status);
  if (U_FAILURE(status)) return std::string(in);
  out16.resize(static_cast<std::size_t>(need));

  // UTF-16 -> UTF-8, preflighted the same way.
  status = U_ZERO_ERROR;
  int32_t need8 = 0;
  u_strToUTF8(nullptr, 0, &need8, out16.data(),
              static_cast<int32_t>(out16.size()), &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
    return std::string(in);
  }
  status = U_ZERO_ERROR;
  std::string out(static_cast<std::size_t>(need8), '\0');
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &need8,
              out16.data(), static_cast<int32_t>(out16.size()), &status);
  if (U_FAILURE(status)) return std::string(in);
  out.resize(static_cast<std::size_t>(need8));
  return out;
}

}  // namespace

std::string normalize_tag(std::string_view raw, const NormalizeOptions& opts) {
  const std::string_view trimmed = trim_view(raw);
  if (!opts.nfc || is_ascii_only(trimmed)) return std::string(trimmed);
  return nfc(trimmed);
}

}  // namespace tagsim

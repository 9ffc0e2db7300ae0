#include "kernelcut/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "kernelcut/serialization.hpp"

namespace kernelcut::io {

using nlohmann::json;

namespace {

constexpr std::string_view kCsvHeader = "kernel_id,fpr_id,thickness_tenths_mm,piece_count,oversize";

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

// Comma-separated fields; double quotes may wrap a field and "" escapes a quote.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else {
      current += c;
    }
  }
  if (quoted) parse_error(line_no, "unterminated quoted field");
  fields.push_back(was_quoted ? current : trim(current));
  return fields;
}

template <class Int>
Int parse_int(const std::string& text, std::size_t line, const char* column) {
  Int value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    parse_error(line, std::string(column) + " is not an integer: \"" + text + "\"");
  }
  return value;
}

OrderBook parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<Kernel> kernels;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_csv(line, line_no);
    if (!header_seen) {
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) joined += (i ? "," : "") + fields[i];
      if (joined != kCsvHeader) {
        parse_error(line_no, "expected header \"" + std::string(kCsvHeader) + "\"");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      parse_error(line_no, "expected 5 columns, found " + std::to_string(fields.size()));
    }
    Kernel k;
    k.kernel_id = fields[0];
    k.fpr_id = fields[1];
    if (k.kernel_id.empty()) parse_error(line_no, "kernel_id is empty");
    if (k.fpr_id.empty()) parse_error(line_no, "fpr_id is empty");
    k.thickness.tenths = parse_int<std::int32_t>(fields[2], line_no, "thickness_tenths_mm");
    k.piece_count = parse_int<std::int64_t>(fields[3], line_no, "piece_count");
    if (fields[4] == "1") {
      k.oversize = true;
    } else if (fields[4] != "0") {
      parse_error(line_no, "oversize must be 0 or 1, found \"" + fields[4] + "\"");
    }
    kernels.push_back(std::move(k));
  }
  if (!header_seen) parse_error(line_no == 0 ? 1 : line_no, "missing header row");
  return OrderBook::from_kernels(std::move(kernels));
}

OrderBook parse_json(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    parse_error(line, e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("kernels")) {
      throw Error(ErrorCode::ParseError, "line 1: expected an object with a \"kernels\" array");
    }
    std::vector<Kernel> kernels = doc.at("kernels").get<std::vector<Kernel>>();
    if (!doc.contains("fprs")) {
      auto book = OrderBook::from_kernels(std::move(kernels));
      if (doc.contains("n_fprs")) book.n_fprs = doc.at("n_fprs").get<std::size_t>();
      return book;
    }
    OrderBook book;
    book.kernels = std::move(kernels);
    for (const auto& f : doc.at("fprs")) {
      FinishedProductReference fpr;
      fpr.fpr_id = f.at("fpr_id").get<std::string>();
      fpr.kernel_ids = f.at("kernel_ids").get<std::vector<std::string>>();
      if (f.contains("thickness_set")) {
        for (auto t : f.at("thickness_set").get<std::vector<std::int32_t>>()) {
          fpr.thickness_set.insert(Thickness{t});
        }
      } else {
        for (const auto& kid : fpr.kernel_ids) {
          if (const auto* k = book.find_kernel(kid)) fpr.thickness_set.insert(k->thickness);
        }
      }
      book.fprs.push_back(std::move(fpr));
    }
    book.n_fprs = doc.value("n_fprs", book.fprs.size());
    return book;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("line 1: ") + e.what());
  }
}

}  // namespace

OrderFormat order_format_from_string(std::string_view name) {
  if (name == "csv") return OrderFormat::Csv;
  if (name == "json") return OrderFormat::Json;
  throw Error(ErrorCode::ParseError, "unknown order format \"" + std::string(name) + "\"");
}

InvalidOrderBookError::InvalidOrderBookError(ValidationReport report)
    : Error(ErrorCode::InvalidOrderBook,
            std::to_string(report.violations.size()) + " violation(s), first: " +
                (report.violations.empty() ? std::string("none")
                                           : std::string(to_string(report.violations[0].kind)) +
                                                 " " + report.violations[0].subject)),
      report_(std::move(report)) {}

OrderBook parse_orders_unchecked(std::istream& in, OrderFormat format) {
  return format == OrderFormat::Csv ? parse_csv(in) : parse_json(in);
}

OrderBook parse_orders(std::istream& in, OrderFormat format) {
  auto book = parse_orders_unchecked(in, format);
  auto report = validate_order_book(book);
  if (!report.valid()) throw InvalidOrderBookError(std::move(report));
  return book;
}

std::string serialize_orders(const OrderBook& book, OrderFormat format) {
  if (format == OrderFormat::Json) return json(book).dump(2) + "\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos && trim(s) == s) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& k : book.kernels) {
    out << quote(k.kernel_id) << ',' << quote(k.fpr_id) << ',' << k.thickness.tenths << ','
        << k.piece_count << ',' << (k.oversize ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

std::string order_digest(const OrderBook& book) {
  OrderBook canonical = book;
  std::sort(canonical.kernels.begin(), canonical.kernels.end(),
            [](const Kernel& a, const Kernel& b) { return a.kernel_id < b.kernel_id; });
  for (auto& f : canonical.fprs) std::sort(f.kernel_ids.begin(), f.kernel_ids.end());
  std::sort(canonical.fprs.begin(), canonical.fprs.end(),
            [](const auto& a, const auto& b) { return a.fpr_id < b.fpr_id; });
  return sha256_hex(json(canonical).dump());
}

}  // namespace kernelcut::io

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kernelcut/io.hpp"
#include "support/instances.hpp"

using namespace kernelcut;
using kernelcut::testing::make_kernel;

namespace {

constexpr const char* kHeader = "kernel_id,fpr_id,thickness_tenths_mm,piece_count,oversize\n";

OrderBook parse(const std::string& text, io::OrderFormat fmt = io::OrderFormat::Csv) {
  std::istringstream in(text);
  return io::parse_orders(in, fmt);
}

ErrorCode parse_code(const std::string& text, io::OrderFormat fmt = io::OrderFormat::Csv) {
  try {
    parse(text, fmt);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::EmptyInput;
}

}  // namespace

TEST(ParseOrdersTest, ThreeRowsOfOneFpr) {
  const auto book = parse(std::string(kHeader) + "K1,P1,180,3,0\nK2,P1,220,1,0\nK3,P1,180,2,0\n");
  EXPECT_EQ(book.n_fprs, 1u);
  ASSERT_EQ(book.kernels.size(), 3u);
  ASSERT_EQ(book.fprs.size(), 1u);
  EXPECT_EQ(book.fprs[0].thickness_set.size(), 2u);
  EXPECT_EQ(book.kernels[1].thickness, Thickness{220});
}

TEST(ParseOrdersTest, BadThicknessReportsItsLine) {
  const std::string text = std::string(kHeader) + "K1,P1,180,3,0\nK2,P1,abc,1,0\n";
  std::istringstream in(text);
  try {
    io::parse_orders(in, io::OrderFormat::Csv);
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ParseOrdersTest, StructuralCsvErrors) {
  EXPECT_EQ(parse_code("kernel,fpr\nK1,P1\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse_code(std::string(kHeader) + "K1,P1,180,3\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse_code(std::string(kHeader) + "K1,P1,180,3,2\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse_code(""), ErrorCode::ParseError);
}

TEST(ParseOrdersTest, BomQuotesAndBlankLines) {
  const auto book = parse("\xEF\xBB\xBF" + std::string(kHeader) + "\n\"K,1\",P1,180,3,0\n\nK2,P1,190,1,1\n");
  ASSERT_EQ(book.kernels.size(), 2u);
  EXPECT_EQ(book.kernels[0].kernel_id, "K,1");
  EXPECT_TRUE(book.kernels[1].oversize);
}

TEST(ParseOrdersTest, ValidationFailureCarriesReport) {
  const std::string text = std::string(kHeader) + "K1,P1,180,3,0\nK1,P2,190,1,0\n";
  std::istringstream in(text);
  try {
    io::parse_orders(in, io::OrderFormat::Csv);
    FAIL() << "expected InvalidOrderBook";
  } catch (const io::InvalidOrderBookError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidOrderBook);
    ASSERT_FALSE(e.report().valid());
    EXPECT_EQ(e.report().violations[0].kind, ViolationKind::DuplicateKernelId);
  }
}

TEST(ParseOrdersTest, JsonMirrorsModelFields) {
  const auto book = parse(R"({"kernels": [
      {"kernel_id": "K1", "fpr_id": "P1", "thickness": 180, "piece_count": 3, "oversize": false},
      {"kernel_id": "K2", "fpr_id": "P2", "thickness": 250, "piece_count": 1}]})",
                          io::OrderFormat::Json);
  EXPECT_EQ(book.n_fprs, 2u);
  EXPECT_EQ(book.find_kernel("K2")->thickness, Thickness{250});
  EXPECT_EQ(parse_code(R"({"kernels": [{"kernel_id": 1}]})", io::OrderFormat::Json), ErrorCode::ParseError);
  EXPECT_EQ(parse_code("{not json", io::OrderFormat::Json), ErrorCode::ParseError);
}

TEST(ParseOrdersTest, FormatNames) {
  EXPECT_EQ(io::order_format_from_string("csv"), io::OrderFormat::Csv);
  EXPECT_EQ(io::order_format_from_string("json"), io::OrderFormat::Json);
  EXPECT_THROW(io::order_format_from_string("xml"), Error);
}

TEST(OrderDigestTest, CsvAndJsonEncodingsAgree) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto book = kernelcut::testing::random_order_book(rng, 3 + trial % 6, {160, 180, 220, 250}, 3);
    const auto csv = io::serialize_orders(book, io::OrderFormat::Csv);
    const auto js = io::serialize_orders(book, io::OrderFormat::Json);
    EXPECT_EQ(io::order_digest(parse(csv)), io::order_digest(parse(js, io::OrderFormat::Json)));
    EXPECT_EQ(io::order_digest(parse(csv)), io::order_digest(book));
  }
}

TEST(OrderDigestTest, IndependentOfListingOrderAndSensitiveToContent) {
  const auto a = OrderBook::from_kernels({make_kernel("K1", "P1", 180), make_kernel("K2", "P2", 190)});
  const auto b = OrderBook::from_kernels({make_kernel("K2", "P2", 190), make_kernel("K1", "P1", 180)});
  const auto c = OrderBook::from_kernels({make_kernel("K1", "P1", 180), make_kernel("K2", "P2", 220)});
  EXPECT_EQ(io::order_digest(a), io::order_digest(b));
  EXPECT_NE(io::order_digest(a), io::order_digest(c));
}

TEST(OrderDigestTest, Sha256KnownVectors) {
  EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// Serialize then parse keeps the kernels and the validation verdict, for valid
// and invalid books alike.
TEST(RoundTripTest, SerializeParseKeepsValidationReport) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto book = kernelcut::testing::random_order_book(rng, 2 + trial % 5, {180, 190, 220}, 2);
    if (trial % 3 == 1) book.kernels.push_back(book.kernels.front());
    if (trial % 3 == 2) book.kernels.back().piece_count = 0;
    book = OrderBook::from_kernels(book.kernels);
    const auto before = validate_order_book(book);
    for (auto fmt : {io::OrderFormat::Csv, io::OrderFormat::Json}) {
      std::istringstream in(io::serialize_orders(book, fmt));
      const auto back = io::parse_orders_unchecked(in, fmt);
      EXPECT_EQ(back.kernels, book.kernels);
      EXPECT_EQ(validate_order_book(back), before);
    }
  }
}

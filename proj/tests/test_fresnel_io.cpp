#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "osm/errors.hpp"
#include "osm/fresnel_io.hpp"

using namespace osm;

namespace {

MeasurementSet fixture(double ghz = 3.0) {
  return add_noise(born_field(Scene::fresnel_two_disk(), ArrayGeometry{}, Frequency::ghz(ghz)), 0.05, 77);
}

std::string exported(const MeasurementSet& ms, const ColumnMap& cols = {}) {
  std::ostringstream out;
  write_fresnel_file(out, ms, cols);
  return out.str();
}

// Rounding of total = incident + scattered bounds how well the subtraction
// can recover the scattered field.
void check_recovered(const MeasurementSet& got, const MeasurementSet& want) {
  const double k = want.wavenumber();
  const double eps = std::numeric_limits<double>::epsilon();
  for (int m = 1; m <= want.geometry.num_emitters; ++m) {
    for (int n = 1; n <= want.geometry.num_receivers; ++n) {
      const cplx inc = green(receiver_position(want.geometry, m, n), emitter_position(want.geometry, m), k);
      const double bound = 2.0 * eps * (std::abs(inc) + std::abs(want.sample(m, n)));
      CHECK(std::abs(got.sample(m, n).real() - want.sample(m, n).real()) <= bound);
      CHECK(std::abs(got.sample(m, n).imag() - want.sample(m, n).imag()) <= bound);
    }
  }
}

}  // namespace

TEST_CASE("column map parsing and validation") {
  const ColumnMap def;
  CHECK(ColumnMap::parse(def.to_string()).to_string() == def.to_string());
  const ColumnMap c = ColumnMap::parse("tx=1,rx=0,freq=7,re_tot=2,im_tot=3,re_inc=4,im_inc=5,width=8,unit=Hz,conj=1");
  CHECK(c.tx_angle == 1);
  CHECK(c.freq == 7);
  CHECK(c.unit == FrequencyUnit::hz);
  CHECK(c.conjugate);
  CHECK(ColumnMap::parse("unit=ghz").unit == FrequencyUnit::ghz);
  CHECK_THROWS_AS(ColumnMap::parse("tx=1"), InvalidInput);             // duplicates rx
  CHECK_THROWS_AS(ColumnMap::parse("width=6"), InvalidInput);          // im_inc outside
  CHECK_THROWS_AS(ColumnMap::parse("colour=3"), InvalidInput);
  CHECK_THROWS_AS(ColumnMap::parse("tx=a"), InvalidInput);
  CHECK_THROWS_AS(ColumnMap::parse("unit=MHz"), InvalidInput);
  CHECK_THROWS_AS(ColumnMap::parse("tx"), InvalidInput);
}

TEST_CASE("comments and blank lines are skipped") {
  std::istringstream in(
      "# header one\n"
      "Tx Rx Freq ...\n"
      "% another comment\n"
      "\n"
      "0 60 1 0.1 0.2 0.3 0.4\n"
      "   \n"
      "10 +65.0 1 -1e-3 2E-3 3 4\n");
  const auto recs = parse_stream(in, {});
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].tx_angle == 0.0);
  CHECK(recs[0].rx_angle == 60.0);
  CHECK(recs[0].freq_hz == 1e9);
  CHECK(recs[0].total == cplx(0.1, 0.2));
  CHECK(recs[0].incident == cplx(0.3, 0.4));
  CHECK(recs[1].rx_angle == 65.0);
  CHECK(recs[1].total == cplx(-1e-3, 2e-3));
}

TEST_CASE("angles are wrapped into [0, 360)") {
  std::istringstream in("-10 370 2 0 0 0 0\n360 720 2 0 0 0 0\n");
  const auto recs = parse_stream(in, {});
  CHECK(recs[0].tx_angle == doctest::Approx(350.0));
  CHECK(recs[0].rx_angle == doctest::Approx(10.0));
  CHECK(recs[1].tx_angle == 0.0);
  CHECK(recs[1].rx_angle == 0.0);
}

TEST_CASE("structure and parse errors carry line numbers") {
  SUBCASE("short row") {
    std::istringstream in("# c\n0 60 1 0 0 0 0\n0 65 1 0 0 0\n");
    try {
      parse_stream(in, {});
      FAIL("expected StructureError");
    } catch (const StructureError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("seven fields under an eight-column map") {
    std::istringstream in("0 60 1 0 0 0 0\n");
    CHECK_THROWS_AS(parse_stream(in, ColumnMap::parse("width=8")), StructureError);
  }
  SUBCASE("malformed token") {
    std::istringstream in("0 60 1 0 0 0 0\n\n0 65 1 0.5x 0 0 0\n");
    try {
      parse_stream(in, {});
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("non-finite value") {
    std::istringstream in("0 60 1 nan 0 0 0\n");
    CHECK_THROWS_AS(parse_stream(in, {}), ParseError);
  }
  SUBCASE("non-positive frequency") {
    std::istringstream in("0 60 0 0 0 0 0\n");
    CHECK_THROWS_AS(parse_stream(in, {}), ParseError);
  }
}

TEST_CASE("export then parse reproduces records bit for bit") {
  const MeasurementSet ms = fixture();
  std::istringstream in(exported(ms));
  const auto recs = parse_stream(in, {});
  REQUIRE(recs.size() == 36u * 49u);
  const double k = ms.wavenumber();
  std::size_t i = 0;
  for (int m = 1; m <= 36; ++m) {
    for (int n = 1; n <= 49; ++n, ++i) {
      const cplx inc = green(receiver_position(ms.geometry, m, n), emitter_position(ms.geometry, m), k);
      CHECK(recs[i].incident == inc);
      CHECK(recs[i].total == inc + ms.sample(m, n));
      CHECK(recs[i].freq_hz == ms.freq.hz());
    }
  }
}

TEST_CASE("export, parse, assemble round trip") {
  for (double ghz : {1.0, 4.0, 8.0}) {
    const MeasurementSet ms = fixture(ghz);
    std::istringstream in(exported(ms));
    const auto recs = parse_stream(in, {});
    const MeasurementSet back = assemble(recs, ms.geometry, ms.freq);
    CHECK(back.geometry == ms.geometry);
    CHECK(back.freq == ms.freq);
    check_recovered(back, ms);
  }
}

TEST_CASE("round trip with a permuted column map, Hz and conjugation") {
  const MeasurementSet ms = fixture(2.0);
  const ColumnMap cols = ColumnMap::parse("tx=6,rx=5,freq=0,re_tot=1,im_tot=2,re_inc=3,im_inc=4,width=8,unit=Hz,conj=1");
  std::istringstream in(exported(ms, cols));
  const MeasurementSet back = assemble(parse_stream(in, cols), ms.geometry, ms.freq);
  check_recovered(back, ms);
}

TEST_CASE("assemble is invariant under record order") {
  const MeasurementSet ms = fixture(2.0);
  std::istringstream in(exported(ms));
  auto recs = parse_stream(in, {});
  const MeasurementSet ordered = assemble(recs, ms.geometry, ms.freq);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(recs.begin(), recs.end(), rng);
    CHECK(assemble(recs, ms.geometry, ms.freq).data == ordered.data);
  }
}

TEST_CASE("assemble filters by frequency and tolerates small angle jitter") {
  const MeasurementSet ms = fixture(2.0);
  std::istringstream in(exported(ms));
  auto recs = parse_stream(in, {});
  const MeasurementSet ref = assemble(recs, ms.geometry, ms.freq);

  std::vector<FresnelRecord> mixed = recs;
  for (FresnelRecord r : recs) {
    r.freq_hz = 3e9;
    r.total = cplx(1.0, 1.0);
    mixed.push_back(r);
  }
  CHECK(assemble(mixed, ms.geometry, ms.freq).data == ref.data);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  for (FresnelRecord& r : recs) {
    r.tx_angle = std::fmod(r.tx_angle + jitter(rng) + 360.0, 360.0);
    r.rx_angle = std::fmod(r.rx_angle + jitter(rng) + 360.0, 360.0);
  }
  CHECK(assemble(recs, ms.geometry, ms.freq).data == ref.data);
}

TEST_CASE("assemble: zero scattered field when total equals incident") {
  const MeasurementSet ms = fixture(1.0);
  std::istringstream in(exported(ms));
  auto recs = parse_stream(in, {});
  for (FresnelRecord& r : recs) r.total = r.incident;
  const MeasurementSet zero = assemble(recs, ms.geometry, ms.freq);
  for (const cplx& v : zero.data.raw()) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("assemble: coverage and ambiguity errors") {
  const MeasurementSet ms = fixture(1.0);
  std::istringstream in(exported(ms));
  const auto recs = parse_stream(in, {});

  SUBCASE("dropped record names the missing pair") {
    auto dropped = recs;
    dropped.erase(dropped.begin() + (4 * 49 + 10));  // emitter 5, receiver 11
    try {
      assemble(dropped, ms.geometry, ms.freq);
      FAIL("expected CoverageError");
    } catch (const CoverageError& e) {
      CHECK(std::string(e.what()).find("(5, 11)") != std::string::npos);
    }
  }
  SUBCASE("duplicate record") {
    auto dup = recs;
    dup.push_back(recs[100]);
    CHECK_THROWS_AS(assemble(dup, ms.geometry, ms.freq), AmbiguityError);
  }
  SUBCASE("wrong frequency leaves everything uncovered") {
    CHECK_THROWS_AS(assemble(recs, ms.geometry, Frequency::ghz(1.5)), CoverageError);
  }
  SUBCASE("non-positive tolerance") {
    CHECK_THROWS_AS(assemble(recs, ms.geometry, ms.freq, 0.0), InvalidInput);
  }
}

TEST_CASE("dropped line in an exported file") {
  const MeasurementSet ms = fixture(1.0);
  std::string text = exported(ms);
  // Remove the data row for emitter 1, receiver 1 (third line of the file).
  std::size_t start = 0;
  for (int i = 0; i < 2; ++i) start = text.find('\n', start) + 1;
  text.erase(start, text.find('\n', start) - start + 1);
  std::istringstream in(text);
  try {
    assemble(parse_stream(in, {}), ms.geometry, ms.freq);
    FAIL("expected CoverageError");
  } catch (const CoverageError& e) {
    CHECK(std::string(e.what()).find("(1, 1)") != std::string::npos);
  }
}

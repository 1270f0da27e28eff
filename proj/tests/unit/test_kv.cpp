#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/common/rng.hpp"

using e2oc::KeyValue;

TEST_CASE("parse key value documents") {
    auto kv = KeyValue::parse("# header\nname = bi-tsp\n\nk=20  # inline\nw = 0.5, 0.25 0.25\nname = x\n");
    CHECK(kv.str("name") == "x");
    CHECK(kv.integer("k") == 20);
    CHECK(kv.reals("w") == std::vector<double>{0.5, 0.25, 0.25});
    CHECK(kv.real("missing", 1.5) == 1.5);
    CHECK_THROWS_AS(kv.str("missing"), e2oc::ConfigError);
    CHECK_THROWS_AS(kv.integer("name"), e2oc::ConfigError);
}

TEST_CASE("parse errors carry line numbers") {
    try {
        KeyValue::parse("a = 1\nno equals sign\n");
        FAIL("expected ParseError");
    } catch (const e2oc::ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("reals round trip exactly") {
    e2oc::Rng r(1);
    for (int i = 0; i < 1000; ++i) {
        double v = (r.uniform() - 0.5) * std::pow(10.0, r.between(-30, 30));
        CHECK(std::stod(e2oc::format_real(v)) == v);
    }
    KeyValue kv;
    kv.set("x", 0.1);
    kv.set("v", std::vector<double>{1.0 / 3.0, 2.5});
    auto back = KeyValue::parse(kv.serialize());
    CHECK(back.real("x") == 0.1);
    CHECK(back.reals("v")[0] == 1.0 / 3.0);
}

TEST_CASE("save and load") {
    auto dir = std::filesystem::temp_directory_path() / "e2oc_kv_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    KeyValue kv;
    kv.set("a", 3LL);
    kv.save(dir / "x.kv");
    CHECK(KeyValue::load(dir / "x.kv").integer("a") == 3);
    CHECK_THROWS(KeyValue::load(dir / "absent.kv"));
    std::filesystem::remove_all(dir.parent_path());
}

#include <doctest.h>

#include "helpers.hpp"

#include <ttrules/error.hpp>
#include <ttrules/tabular.hpp>

#include <fstream>
#include <numeric>
#include <random>
#include <set>

using namespace ttrules;

namespace
{

schema mitoses_schema( std::size_t thresholds = 8 )
{
  schema s;
  s.features.push_back( { "Mitoses", feature_kind::continuous, {}, thresholds } );
  s.target = "Class";
  return s;
}

std::filesystem::path data_dir()
{
  return std::filesystem::path( TTRULES_SOURCE_DIR ) / "data";
}

schema breast_cancer_schema()
{
  return load_schema( std::filesystem::path( TTRULES_SOURCE_DIR ) / "configs" / "breast_cancer_schema.json" );
}

} // namespace

TEST_CASE( "load_csv ingests typed columns in row order" )
{
  auto const raw = test::parse_csv( "Mitoses,Class\n1,0\n3,1\n2,0\n5,1\n", mitoses_schema() );
  CHECK( raw.size() == 4 );
  REQUIRE( raw.columns.size() == 1 );
  CHECK( raw.columns[0].numeric == std::vector<double>{ 1, 3, 2, 5 } );
  CHECK( raw.targets == std::vector<double>{ 0, 1, 0, 1 } );
  CHECK( raw.class_names == std::vector<std::string>{ "0", "1" } );
}

TEST_CASE( "load_csv handles quoting and CRLF" )
{
  schema s;
  s.features.push_back( { "Size, mm", feature_kind::continuous, {}, 2 } );
  s.features.push_back( { "Color", feature_kind::categorical, { "red", "blue \"navy\"" }, 8 } );
  s.target = "y";
  auto const raw = test::parse_csv( "\"Size, mm\",Color,y\r\n1.5,red,a\r\n2,\"blue \"\"navy\"\"\",b\r\n", s );
  CHECK( raw.size() == 2 );
  CHECK( raw.columns[1].labels == std::vector<std::string>{ "red", "blue \"navy\"" } );
  CHECK( raw.targets == std::vector<double>{ 0, 1 } );
}

TEST_CASE( "load_csv errors" )
{
  SUBCASE( "missing column names it" )
  {
    try
    {
      test::parse_csv( "Other,Class\n1,0\n", mitoses_schema() );
      FAIL( "expected schema_error" );
    }
    catch ( schema_error const& e )
    {
      CHECK( std::string{ e.what() }.find( "Mitoses" ) != std::string::npos );
    }
  }
  SUBCASE( "unparseable number names row and column" )
  {
    try
    {
      test::parse_csv( "Mitoses,Class\n1,0\nabc,1\n", mitoses_schema() );
      FAIL( "expected parse_error" );
    }
    catch ( parse_error const& e )
    {
      std::string const what = e.what();
      CHECK( what.find( "row 2" ) != std::string::npos );
      CHECK( what.find( "Mitoses" ) != std::string::npos );
    }
  }
  SUBCASE( "missing value is rejected" )
  {
    CHECK_THROWS_AS( test::parse_csv( "Mitoses,Class\n?,0\n1,1\n", mitoses_schema() ), parse_error );
  }
  SUBCASE( "unseen category" )
  {
    schema s;
    s.features.push_back( { "Color", feature_kind::categorical, { "r", "g" }, 8 } );
    s.target = "y";
    CHECK_THROWS_AS( test::parse_csv( "Color,y\nr,0\nb,1\n", s ), value_error );
  }
  SUBCASE( "missing file" )
  {
    CHECK_THROWS_AS( load_csv( "/nonexistent/file.csv", mitoses_schema() ), schema_error );
  }
}

TEST_CASE( "schema validation" )
{
  CHECK_THROWS_AS( schema_from_json( nlohmann::json::parse( R"({"target":"y","features":[{"name":"a"},{"name":"a"}]})" ) ),
                   schema_error );
  CHECK_THROWS_AS( schema_from_json( nlohmann::json::parse( R"({"target":"y","features":[{"name":"a","kind":"categorical","categories":["x"]}]})" ) ),
                   schema_error );
  CHECK_THROWS_AS( schema_from_json( nlohmann::json::parse( R"({"target":"y","features":[{"name":"a","n_thresholds":0}]})" ) ),
                   schema_error );
  CHECK_THROWS_AS( schema_from_json( nlohmann::json::parse( R"({"target":"y","features":[],"extra":1})" ) ), config_error );
  auto const s = schema_from_json( nlohmann::json::parse( R"({"target":"y","task":"regression","features":[{"name":"a"}]})" ) );
  CHECK( s.task.kind == task_kind::regression );
  CHECK( s.features[0].n_thresholds == 8 );
}

TEST_CASE( "Breast Cancer file: 683 complete rows out of 699" )
{
  /* independent count over the raw UCI file: rows without a '?' cell */
  std::ifstream raw_file( data_dir() / "breast-cancer-wisconsin.data" );
  std::size_t total = 0, complete = 0;
  for ( std::string line; std::getline( raw_file, line ); )
  {
    if ( line.empty() )
      continue;
    ++total;
    complete += line.find( '?' ) == std::string::npos ? 1u : 0u;
  }
  CHECK( total == 699 );
  CHECK( complete == 683 );

  auto const raw = load_csv( data_dir() / "breast_cancer_wisconsin.csv", breast_cancer_schema() );
  CHECK( raw.size() == 683 );
  CHECK( raw.columns.size() == 9 );
}

TEST_CASE( "midpoint quantile thresholds" )
{
  SUBCASE( "median of 1..4 is 2.5" )
  {
    auto const raw = test::parse_csv( "Mitoses,Class\n1,0\n2,1\n3,0\n4,1\n", mitoses_schema( 1 ) );
    auto const map = fit_binarizer( raw );
    CHECK( map.features()[0].thresholds == std::vector<double>{ 2.5 } );
  }
  SUBCASE( "constant column gives no bits and a warning" )
  {
    auto const raw = test::parse_csv( "Mitoses,Class\n5,0\n5,1\n5,0\n", mitoses_schema( 3 ) );
    auto const map = fit_binarizer( raw );
    CHECK( map.features()[0].thresholds.empty() );
    CHECK( map.total_bits() == 0 );
    CHECK( map.warnings().size() == 1 );
  }
  SUBCASE( "grades 1..9 with 8 thresholds" )
  {
    std::string csv = "Mitoses,Class\n";
    for ( int v = 1; v <= 9; ++v )
      csv += std::to_string( v ) + "," + std::to_string( v % 2 ) + "\n";
    auto const map = fit_binarizer( test::parse_csv( csv, mitoses_schema( 8 ) ) );
    /* hand-computed: position h = 8j/9 lies strictly between j-1 and j, so
       each threshold is the midpoint of two consecutive grades */
    CHECK( map.features()[0].thresholds == std::vector<double>{ 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5, 8.5 } );
  }
  SUBCASE( "duplicate quantiles collapse" )
  {
    auto const raw = test::parse_csv( "Mitoses,Class\n1,0\n1,1\n1,0\n1,1\n1,0\n9,1\n", mitoses_schema( 4 ) );
    auto const map = fit_binarizer( raw );
    auto const& t = map.features()[0].thresholds;
    CHECK( std::adjacent_find( t.begin(), t.end(), std::greater_equal<>() ) == t.end() );
    CHECK( t.size() < 4 );
  }
}

TEST_CASE( "binarize: thermometer and one-hot codes" )
{
  feature_encoding x{ "x", feature_kind::continuous, { 2, 4, 6 }, {}, 0, 0 };
  feature_encoding c{ "c", feature_kind::categorical, {}, { "A", "B", "C" }, 0, 0 };
  binarizer_map const map( { x, c } );
  schema s;
  s.features = { { "x", feature_kind::continuous, {}, 3 }, { "c", feature_kind::categorical, { "A", "B", "C" }, 8 } };
  s.target = "y";
  auto const raw = test::parse_csv( "x,c,y\n5.0,B,0\n4,A,1\n", s );
  auto const ds = binarize( raw, map );
  REQUIRE( ds.total_bits == 6 );
  auto const r0 = ds.row( 0 );
  CHECK( std::vector<std::uint8_t>( r0.begin(), r0.end() ) == std::vector<std::uint8_t>{ 1, 1, 0, 0, 1, 0 } );
  /* x equal to the second threshold sets that bit */
  auto const r1 = ds.row( 1 );
  CHECK( std::vector<std::uint8_t>( r1.begin(), r1.begin() + 3 ) == std::vector<std::uint8_t>{ 1, 1, 0 } );
  CHECK( map.bit_names()[1] == "x ≥ 4" );
  CHECK( map.bit_names()[4] == "c = B" );

  binarizer_map const narrow( { x, feature_encoding{ "c", feature_kind::categorical, {}, { "A", "C" }, 0, 0 } } );
  CHECK_THROWS_AS( binarize( raw, narrow ), value_error );
}

TEST_CASE( "binarize round trip keeps invariants and bit names describe bits" )
{
  std::mt19937_64 rng( 11 );
  schema s;
  s.features = { { "u", feature_kind::continuous, {}, 5 },
                 { "v", feature_kind::continuous, {}, 3 },
                 { "k", feature_kind::categorical, { "p", "q", "r" }, 8 },
                 { "f", feature_kind::binary, {}, 8 } };
  s.target = "y";
  std::string csv = "u,v,k,f,y\n";
  char const* cats[] = { "p", "q", "r" };
  for ( int i = 0; i < 200; ++i )
  {
    auto const u = static_cast<double>( rng() % 1000 ) / 37.0;
    auto const v = static_cast<double>( rng() % 7 );
    csv += format_double( u ) + "," + format_double( v ) + "," + cats[rng() % 3] + "," + std::to_string( rng() % 2 ) + "," +
           std::to_string( i % 2 ) + "\n";
  }
  auto const raw = test::parse_csv( csv, s );
  auto const map = fit_binarizer( raw );
  auto const ds = binarize( raw, map );
  CHECK( check_invariants( ds ).empty() );
  CHECK( map.bit_names().size() == map.total_bits() );

  /* re-evaluate every named predicate on the raw values */
  for ( auto bit = 0u; bit < map.total_bits(); ++bit )
  {
    auto const& name = map.bit_names()[bit];
    auto const& f = map.feature_of_bit( bit );
    auto const feature = map.origin( bit ).feature;
    for ( auto r = 0u; r < raw.size(); ++r )
    {
      bool expected = false;
      if ( auto const pos = name.find( " ≥ " ); pos != std::string::npos )
        expected = raw.columns[feature].numeric[r] >= parse_double( name.substr( pos + std::string( " ≥ " ).size() ) );
      else if ( auto const eq = name.find( " = " ); eq != std::string::npos )
        expected = raw.columns[feature].labels[r] == name.substr( eq + 3 );
      else
        expected = raw.columns[feature].numeric[r] == 1.0;
      REQUIRE_MESSAGE( ds.row( r )[bit] == ( expected ? 1 : 0 ), f.name );
    }
  }

  /* JSON reload is bit-exact */
  auto const reloaded = binarizer_map::from_json( nlohmann::json::parse( map.to_json().dump() ) );
  CHECK( reloaded.features()[0].thresholds == map.features()[0].thresholds );
  CHECK( binarize( raw, reloaded ).bits == ds.bits );
}

TEST_CASE( "kfold_split" )
{
  task_type const binary{};
  SUBCASE( "balanced 10 samples into 5 folds of 2, one per class" )
  {
    std::vector<double> const y{ 0, 1, 0, 1, 0, 1, 0, 1, 0, 1 };
    auto const folds = kfold_split( y, binary, 5, 3 );
    REQUIRE( folds.size() == 5 );
    for ( auto const& f : folds )
    {
      REQUIRE( f.test.size() == 2 );
      CHECK( y[f.test[0]] != y[f.test[1]] );
      CHECK( f.train.size() == 8 );
    }
  }
  SUBCASE( "deterministic in the seed" )
  {
    std::vector<double> y( 40 );
    for ( auto i = 0u; i < y.size(); ++i )
      y[i] = i % 3 == 0 ? 1.0 : 0.0;
    auto const a = kfold_split( y, binary, 4, 9 );
    auto const b = kfold_split( y, binary, 4, 9 );
    for ( auto f = 0u; f < 4; ++f )
      CHECK( a[f].test == b[f].test );
    auto const c = kfold_split( y, binary, 4, 10 );
    bool differs = false;
    for ( auto f = 0u; f < 4; ++f )
      differs = differs || a[f].test != c[f].test;
    CHECK( differs );
  }
  SUBCASE( "683 rows into 5 folds" )
  {
    std::vector<double> y( 683 );
    for ( auto i = 0u; i < y.size(); ++i )
      y[i] = i < 444 ? 0.0 : 1.0;
    auto const folds = kfold_split( y, binary, 5, 0 );
    std::multiset<std::size_t> sizes;
    std::vector<int> seen( y.size(), 0 );
    for ( auto const& f : folds )
    {
      sizes.insert( f.test.size() );
      for ( auto const i : f.test )
        ++seen[i];
    }
    CHECK( sizes == std::multiset<std::size_t>{ 136, 136, 137, 137, 137 } );
    CHECK( std::all_of( seen.begin(), seen.end(), []( int s ) { return s == 1; } ) );
  }
  SUBCASE( "regression folds are unstratified and partition" )
  {
    std::vector<double> y( 23 );
    std::iota( y.begin(), y.end(), 0.5 );
    auto const folds = kfold_split( y, task_type{ task_kind::regression, 0 }, 5, 1 );
    std::size_t total = 0;
    for ( auto const& f : folds )
    {
      CHECK( ( f.test.size() == 4 || f.test.size() == 5 ) );
      total += f.test.size();
    }
    CHECK( total == 23 );
  }
  SUBCASE( "class with fewer than k members" )
  {
    std::vector<double> const y{ 0, 0, 0, 0, 0, 1, 1 };
    CHECK_THROWS_AS( kfold_split( y, binary, 3, 0 ), stratification_error );
  }
}

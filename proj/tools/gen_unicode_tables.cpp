// Regenerates src/unicode_tables.inc and its checksum manifest.
//
//   gen_unicode_tables --ucd-dir DIR --unicode-version 14.0 --out-dir src
//   gen_unicode_tables --icu --out-dir src
//
// With --ucd-dir the tables come from UnicodeData.txt and PropList.txt; with
// --icu they come from the ICU library the regex oracle is linked against.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "peek2/errors.hpp"
#include "peek2/ucd_extract.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Generate Unicode property tables"};
    std::string ucd_dir;
    std::string version;
    bool from_icu = false;
    std::string out_dir = "src";
    auto* ucd_opt = app.add_option("--ucd-dir", ucd_dir, "Directory holding UnicodeData.txt and PropList.txt");
    app.add_option("--unicode-version", version, "Version label for --ucd-dir input");
    app.add_flag("--icu", from_icu, "Extract from the linked ICU instead")->excludes(ucd_opt);
    app.add_option("--out-dir", out_dir, "Output directory");
    CLI11_PARSE(app, argc, argv);

    if (!from_icu && ucd_dir.empty()) {
        std::cerr << "one of --ucd-dir or --icu is required\n";
        return 2;
    }

    try {
        peek2::ucd::ExtractedTables tables;
        if (from_icu) {
            tables = peek2::ucd::extract_from_icu();
        } else {
            if (version.empty()) {
                std::cerr << "--unicode-version is required with --ucd-dir\n";
                return 2;
            }
            std::ifstream unicode_data(fs::path(ucd_dir) / "UnicodeData.txt");
            std::ifstream prop_list(fs::path(ucd_dir) / "PropList.txt");
            if (!unicode_data || !prop_list) {
                std::cerr << "cannot open UCD files in " << ucd_dir << "\n";
                return 2;
            }
            tables = peek2::ucd::extract_from_ucd(unicode_data, prop_list, version);
        }

        const auto source = peek2::ucd::render_source(tables);
        std::ofstream(fs::path(out_dir) / "unicode_tables.inc", std::ios::binary) << source;
        std::ofstream(fs::path(out_dir) / "unicode_tables.manifest", std::ios::binary)
            << peek2::ucd::render_manifest(tables, source);
        std::cout << "Unicode " << tables.unicode_version << ": " << tables.letters.size()
                  << " letter, " << tables.numbers.size() << " number, "
                  << tables.whitespace.size() << " whitespace ranges\n";
    } catch (const peek2::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

// Regenerates data/weight22_level1.json from the internal constructions.
#include <iostream>

#include "skl/kohnen.hpp"
#include "skl/records.hpp"

int main(int argc, char** argv) {
    using namespace skl;
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <output.json>\n";
        return 2;
    }
    set_digits(50);
    RecordSet s;
    auto f = eigenbasis_level1(22, 200).forms.at(0);
    s.newforms.push_back(to_record(f, 200, 40));
    s.halfint.push_back(to_record(plus_basis_level4(11, 401).at(0).normalized(), f.label() + "/plus", 40));
    save_records(s, argv[1]);
    std::cerr << "wrote " << argv[1] << "\n";
}

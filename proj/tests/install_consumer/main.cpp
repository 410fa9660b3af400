#include <iostream>
#include <sstream>

#include "flowmine/pipeline.hpp"

int main() {
    auto d = flowmine::load_design("design d\ninput a : 1\nreg b : 1 = 0\nalways b <= a\n");
    std::istringstream tb("cycle,a\n0,1\n1,0\n2,1\n");
    auto spec = flowmine::mine_specification(d, flowmine::read_testbench(tb));
    auto text = flowmine::specification_text(spec);
    std::cout << text;
    return spec.properties.size() == 1 && text.find("_src_ in {a}") != std::string::npos ? 0 : 1;
}

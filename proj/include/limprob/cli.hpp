#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace limprob {

inline int run_cli(const std::vector<std::string>&, std::ostream& out, std::ostream&) {
  out << "limprob\n";
  return 0;
}

}  // namespace limprob

/* Copyright 2026 The PeerHOL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <iostream>

#include "peerhol/syntax.hpp"

int main() {
  peerhol::ConstantList env;
  env.add("a", peerhol::Type::prop());
  const peerhol::Term t = peerhol::parse_term("a --> a", env);
  std::cout << peerhol::print_term(t, env) << "\n";
  return peerhol::print_term(t, env) == "a ⟶ a" ? 0 : 1;
}

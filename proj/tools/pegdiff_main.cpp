#include <cstdio>

int main() {
  std::puts("pegdiff: CLI under construction");
  return 1;
}

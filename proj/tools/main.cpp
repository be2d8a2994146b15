#include <cstdio>

int main() {
  std::puts("vemns: command line interface not wired up yet");
  return 2;
}

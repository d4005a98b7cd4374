#include <cstdio>
int main() { std::puts("sedkit cli placeholder"); return 0; }

#include <string.h>
#include "Probe.h"

Probe::Probe(): tag('P'), weight(0.5), count(0), label(0), peer(0), ratio(0.25f)
{ for (int i = 0; i < 2; i++) for (int j = 0; j < 3; j++) grid[i][j] = 0; }

double Probe::total(double x1, objc_t& rest)
{ double sum = x1, d; for (int i = 0; i < count; i++) { rest >> d; sum += d; } return sum; }

double Probe::promo(int n, objc_t& rest)
{
  float f; char c; short s; long long ll; const char *p;
  rest >> f >> c >> s >> ll >> p;
  return n + f + c + s + ll + strlen(p);
}

int Probe::bump(int by) { count += by; return count; }
void Probe::reset() { count = 0; }

int Probe::gridSum()
{ int s = 0; for (int i = 0; i < 2; i++) for (int j = 0; j < 3; j++) s += grid[i][j]; return s; }

double Probe::mix(float f, char c, short s, long l) { return f + c + s + l; }
int Probe::labelLength() { return label ? (int) strlen(label) : -1; }
id Probe::self_peer() { return peer; }
int Probe::cpp_hidden() { return 0; }
int Probe::size(std::vector<int> v) { return (int) v.size(); }

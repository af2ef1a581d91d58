"""The fixed C++ support header shared by every bridged class."""

SUPPORT_HEADER_NAME = "ObjCsupport.h"

SUPPORT_HEADER = r"""#ifndef OBJCSUPPORT_H
#define OBJCSUPPORT_H

#include <stdarg.h>

/* Objective-C object handle as seen from C++. */
typedef struct objc_object *id;

/* Base of every bridged class.  Its only member occupies the slot of the
   Objective-C isa pointer so that C++ field offsets match the ivar layout.
   The empty user-provided constructor leaves isa untouched when the bridge
   default-constructs C++ members in place over a runtime-allocated object. */
class objc_obj
{
public:
  void *isa;
  objc_obj() {}
};

/* Cursor over the unnamed arguments of a variadic Objective-C method.
   Extraction reads one argument and advances; narrow types are read at
   their promoted width (float via double, char and short via int). */
class objc_t
{
public:
  va_list *ap;
  objc_t(): ap(0) {}
};

inline objc_t& operator>>(objc_t& b, double& x) { x = va_arg(*b.ap, double); return b; }
inline objc_t& operator>>(objc_t& b, long double& x) { x = va_arg(*b.ap, long double); return b; }
inline objc_t& operator>>(objc_t& b, float& x) { x = (float) va_arg(*b.ap, double); return b; }
inline objc_t& operator>>(objc_t& b, char& x) { x = (char) va_arg(*b.ap, int); return b; }
inline objc_t& operator>>(objc_t& b, signed char& x) { x = (signed char) va_arg(*b.ap, int); return b; }
inline objc_t& operator>>(objc_t& b, unsigned char& x) { x = (unsigned char) va_arg(*b.ap, int); return b; }
inline objc_t& operator>>(objc_t& b, short& x) { x = (short) va_arg(*b.ap, int); return b; }
inline objc_t& operator>>(objc_t& b, unsigned short& x) { x = (unsigned short) va_arg(*b.ap, int); return b; }
inline objc_t& operator>>(objc_t& b, int& x) { x = va_arg(*b.ap, int); return b; }
inline objc_t& operator>>(objc_t& b, unsigned& x) { x = va_arg(*b.ap, unsigned); return b; }
inline objc_t& operator>>(objc_t& b, long& x) { x = va_arg(*b.ap, long); return b; }
inline objc_t& operator>>(objc_t& b, unsigned long& x) { x = va_arg(*b.ap, unsigned long); return b; }
inline objc_t& operator>>(objc_t& b, long long& x) { x = va_arg(*b.ap, long long); return b; }
inline objc_t& operator>>(objc_t& b, unsigned long long& x) { x = va_arg(*b.ap, unsigned long long); return b; }
template <class T>
inline objc_t& operator>>(objc_t& b, T*& x) { x = va_arg(*b.ap, T*); return b; }

#endif
"""


def emit_support() -> str:
    return SUPPORT_HEADER

extern "C" void cpp_Heatbug_step(Heatbug * obj)
{ obj->step(); }

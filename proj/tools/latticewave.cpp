int lw_cli_run(int argc, const char* const* argv);

int main(int argc, char** argv) { return lw_cli_run(argc, argv); }

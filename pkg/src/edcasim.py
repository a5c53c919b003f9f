"""
EdcaSim - Script Principal de Entrada

Simulador de eventos discretos do acesso ao meio IEEE 802.11 (DCF e EDCA)
em uma BSS de infraestrutura.

Uso:
    python main.py run --scenario edca-default --seed 7 --reps 10
    python main.py run --scenario meu_cenario.yaml --format json --trace
    python main.py sweep --base txop-sweep
    python main.py sweep --base aifs-sweep --param aifsn --target 1:VI --values 3,7,12,14
    python main.py list-scenarios
    python main.py oracle --window 16
    python main.py config

Códigos de saída: 0 sucesso, 1 oráculo reprovado, 2 erro de configuração,
3 erro de E/S, 130 interrompido.
"""

import argparse
import logging
import sys
from dataclasses import replace
from datetime import datetime
from pathlib import Path
from typing import List, Optional

try:
    from colorama import init, Fore, Style
    init(autoreset=True)
    CORES_DISPONIVEIS = True
except ImportError:
    CORES_DISPONIVEIS = False
    class Fore:
        GREEN = YELLOW = RED = CYAN = MAGENTA = BLUE = WHITE = ""
    class Style:
        BRIGHT = RESET_ALL = ""

from src.core.cenarios import (
    CENARIOS_EMBUTIDOS,
    MODOS_MAC,
    PARAMETROS_SWEEP,
    ScenarioConfig,
    SweepSpec,
    carregar_cenario,
    carregar_sweep,
    com_duracao,
    com_mac,
    eh_varredura,
    listar_cenarios,
)
from src.core.config import obter
from src.core.erros import ErroConfiguracao
from src.core.metricas_confianca import formatar_com_intervalo
from src.core.parametros import exibir_configuracao, validar_parametros
from src.core.paths import ProjectPaths
from src.utils.logger_estruturado import LoggerEstruturado
from src.utils.sistema_exportacao import FORMATOS, SistemaExportacao, emit
from src.validacao.experimentos import ResultadoReplicacoes, run_replications, run_sweep
from src.validacao.oraculo import RODADAS_PADRAO, comparar_com_simulacao

logger = logging.getLogger(__name__)

VERSAO = "1.0.0"

SAIDA_OK = 0
SAIDA_ORACULO_REPROVADO = 1
SAIDA_CONFIGURACAO = 2
SAIDA_IO = 3
SAIDA_INTERROMPIDO = 130


def exibir_banner_inicial():
    """Exibe banner inicial do sistema."""
    banner = f"""
{Fore.CYAN}{'='*70}
{Fore.YELLOW}    EdcaSim {VERSAO}
{Fore.CYAN}    Simulador determinístico de DCF / EDCA (IEEE 802.11)
{'='*70}{Style.RESET_ALL}
"""
    print(banner)


def _diario() -> Optional[LoggerEstruturado]:
    try:
        return LoggerEstruturado("edcasim", str(ProjectPaths.LOGS))
    except OSError as e:
        logger.warning("diário de execução indisponível: %s", e)
        return None


def _destino(args) -> Path:
    return Path(args.out) if args.out else ProjectPaths.RESULTADO


def _inteiros(texto: str, campo: str) -> List[int]:
    try:
        return [int(v) for v in texto.split(',') if v.strip()]
    except ValueError:
        raise ErroConfiguracao(f"lista de inteiros inválida: '{texto}'", campo=campo) from None


def _ajustar_cenario(config: ScenarioConfig, args) -> ScenarioConfig:
    if getattr(args, 'mac', None):
        config = com_mac(config, args.mac)
    if args.duration is not None:
        config = com_duracao(config, args.duration)
    warmup = getattr(args, 'warmup', None)
    if warmup is not None and not 0 <= warmup < config.duration_s:
        raise ErroConfiguracao(
            f"warmup deve estar em [0, {config.duration_s}) s (atual: {warmup})", campo='warmup_s'
        )
    return config


# ============================================================================
# SAÍDA NO CONSOLE
# ============================================================================

def exibir_resumo(resultado: ResultadoReplicacoes):
    """Atraso médio por classe e janela (com IC 95% quando reps > 1)."""
    relatorios = resultado.relatorios
    primeiro = relatorios[0]
    print(f"\n{Fore.CYAN}📊 {resultado.scenario} | {primeiro.mac_mode.upper()} | "
          f"seed base {resultado.seed} | {len(relatorios)} replicação(ões){Style.RESET_ALL}")
    for janela in primeiro.windows:
        print(f"\n{Fore.YELLOW}   Janela {janela.index}: {janela.start_us / 1e6:.1f} s - "
              f"{janela.end_us / 1e6:.1f} s, {janela.n_stations} estações{Style.RESET_ALL}")
        for agregado in resultado.agregado:
            if agregado.window != janela.index:
                continue
            medias = [m for m in (r.mean_ms(agregado.traffic_class, janela.index) for r in relatorios) if m is not None]
            if not medias:
                print(f"   • {agregado.traffic_class:<12} sem entregas")
                continue
            texto = formatar_com_intervalo(medias) if len(medias) > 1 else f"{medias[0]:.2f} ms"
            print(f"   • {agregado.traffic_class:<12} {texto}")
    canal = primeiro.channel
    if canal.probabilidade_colisao is not None:
        print(f"\n   📡 utilização {canal.utilizacao:.1%} | colisão por rodada "
              f"{canal.probabilidade_colisao:.4f} (rep 0)")


# ============================================================================
# COMANDOS
# ============================================================================

def comando_run(args, diario: Optional[LoggerEstruturado]) -> int:
    if eh_varredura(args.scenario):
        print(f"{Fore.CYAN}🎚️  {args.scenario} é uma varredura; executando como sweep{Style.RESET_ALL}")
        args.base, args.param, args.target, args.values = args.scenario, None, None, None
        return comando_sweep(args, diario)

    config = _ajustar_cenario(carregar_cenario(args.scenario, args.stations), args)
    seed = config.seed if args.seed is None else args.seed
    reps = config.reps if args.reps is None else args.reps
    if reps < 1:
        raise ErroConfiguracao(f"reps deve ser >= 1 (atual: {reps})", campo='reps')
    destino = _destino(args)
    ProjectPaths.criar_diretorios(destino)

    inicio = datetime.now()
    if diario:
        diario.registrar_inicio('run', config.name, seed, reps, mac_mode=config.mac_mode, duration_s=config.duration_s)

    arquivos: List[Path] = []
    trace = None
    try:
        if args.trace:
            arquivo_trace = destino / f"{config.name}_seed{seed}_trace.csv"
            trace = open(arquivo_trace, 'w', encoding='utf-8')
            trace.write("time_us,seq,target,kind\n")
            arquivos.append(arquivo_trace)
        resultado = run_replications(
            config, seed=seed, reps=reps, workers=args.workers,
            warmup_s=args.warmup, progresso=True, trace=trace,
        )
    finally:
        if trace is not None:
            trace.close()

    arquivos.append(emit(resultado.relatorios, args.format, destino))
    if reps > 1:
        arquivos.append(SistemaExportacao(destino).exportar_agregado(
            resultado.agregado, f"{config.name}_seed{seed}", args.format
        ))
    if args.plot:
        from src.core.visualizacao_graficos import criar_grafico_atraso_janelas
        arquivos.append(criar_grafico_atraso_janelas(resultado.relatorios, destino / f"{config.name}_seed{seed}.png"))

    exibir_resumo(resultado)
    print()
    for arquivo in arquivos:
        print(f"{Fore.GREEN}✅ {arquivo}{Style.RESET_ALL}")
    if diario:
        diario.registrar_execucao(inicio, datetime.now(), config.name, reps, arquivos)
    return SAIDA_OK


def comando_sweep(args, diario: Optional[LoggerEstruturado]) -> int:
    valores = _inteiros(args.values, 'values') if args.values else None
    sweep = carregar_sweep(args.base, args.param, args.target, valores)
    base = _ajustar_cenario(sweep.base, args)
    if base is not sweep.base:
        sweep = replace(sweep, base=base)
    seed = base.seed if args.seed is None else args.seed
    reps = 1 if args.reps is None else args.reps
    if reps < 1:
        raise ErroConfiguracao(f"reps deve ser >= 1 (atual: {reps})", campo='reps')
    destino = _destino(args)
    ProjectPaths.criar_diretorios(destino)

    inicio = datetime.now()
    if diario:
        diario.registrar_inicio(
            'sweep', base.name, seed, reps,
            parametro=sweep.parameter, alvo=f"{sweep.target[0]}:{sweep.target[1].name}", valores=list(sweep.values),
        )
    tabela = run_sweep(sweep, seed=seed, reps=reps, workers=args.workers, warmup_s=getattr(args, 'warmup', None), progresso=True)

    nome = f"{base.name}_{sweep.parameter}_seed{seed}"
    arquivos = [SistemaExportacao(destino).exportar_varredura(tabela, nome, args.format)]
    if args.plot:
        from src.core.visualizacao_graficos import criar_grafico_varredura
        arquivos.append(criar_grafico_varredura(tabela, destino / f"{nome}.png", titulo=f"{base.name}: {sweep.parameter}"))

    print(f"\n{Fore.CYAN}🎚️  {sweep.parameter} em sta{sweep.target[0]}.{sweep.target[1].name} "
          f"(atraso médio em ms){Style.RESET_ALL}\n")
    print(tabela.to_string(index=False, float_format=lambda v: f"{v:.2f}"))
    print()
    for arquivo in arquivos:
        print(f"{Fore.GREEN}✅ {arquivo}{Style.RESET_ALL}")
    if diario:
        diario.registrar_execucao(inicio, datetime.now(), base.name, len(sweep.values) * reps, arquivos)
    return SAIDA_OK


def comando_listar(args, diario: Optional[LoggerEstruturado]) -> int:
    print(f"\n{Fore.CYAN}📋 Cenários embutidos{Style.RESET_ALL}\n")
    for nome, descricao in listar_cenarios():
        marca = " (sweep)" if eh_varredura(nome) else ""
        print(f"   {Fore.YELLOW}{nome:<16}{Style.RESET_ALL} {descricao}{marca}")
    print()
    return SAIDA_OK


def comando_oracle(args, diario: Optional[LoggerEstruturado]) -> int:
    if args.window < 1:
        raise ErroConfiguracao(f"window deve ser >= 1 (atual: {args.window})", campo='window')
    rodadas = RODADAS_PADRAO if args.rounds is None else args.rounds
    if rodadas < 1:
        raise ErroConfiguracao(f"rounds deve ser >= 1 (atual: {rodadas})", campo='rounds')
    seed = 1 if args.seed is None else args.seed
    print(f"\n{Fore.CYAN}🧮 Oráculo: 2 estações saturadas, CW congelada em W={args.window}{Style.RESET_ALL}\n")
    r = comparar_com_simulacao(args.window, rodadas=rodadas, seed=seed, workers=args.workers)
    print(f"   • Enumeração exata:   {r['exata']:.6f} ({r['exata_fracao']})")
    print(f"   • Cadeia residual:    {r['markov']:.6f}")
    print(f"   • Slots por rodada:   {r['slots_por_rodada']:.3f}")
    simulada = 'n/d' if r['simulada'] is None else f"{r['simulada']:.6f}"
    print(f"   • Simulada:           {simulada} em {r['rodadas']} rodadas ({r['replicacoes']} replicações)")
    if r['aprovado']:
        print(f"\n{Fore.GREEN}✅ Dentro da tolerância de {r['tolerancia']:.0%}{Style.RESET_ALL}\n")
        return SAIDA_OK
    print(f"\n{Fore.RED}❌ Fora da tolerância de {r['tolerancia']:.0%}{Style.RESET_ALL}\n")
    return SAIDA_ORACULO_REPROVADO


def comando_config(args, diario: Optional[LoggerEstruturado]) -> int:
    print(exibir_configuracao())
    erros = validar_parametros()
    if erros:
        print(f"\n{Fore.RED}❌ Parâmetros inválidos:{Style.RESET_ALL}")
        for erro in erros:
            print(f"   • {erro}")
        return SAIDA_CONFIGURACAO
    print(f"\n{Fore.GREEN}✅ Parâmetros válidos{Style.RESET_ALL}\n")
    return SAIDA_OK


# ============================================================================
# PARSER
# ============================================================================

def _opcoes_execucao(sub: argparse.ArgumentParser):
    sub.add_argument('--seed', type=int, default=None, help='Semente base (replicação i usa seed+i)')
    sub.add_argument('--reps', type=int, default=None, help='Número de replicações')
    sub.add_argument('--duration', type=float, default=None, help='Duração simulada em segundos')
    sub.add_argument('--out', default=None, help='Diretório de saída (padrão: Resultado/)')
    sub.add_argument('--format', choices=FORMATOS, default=obter('harness.formato', 'csv'), help='Formato dos resultados')
    sub.add_argument('--workers', type=int, default=obter('harness.workers', 1), help='Processos paralelos para as replicações')
    sub.add_argument('--warmup', type=float, default=None, help='Descarta pacotes criados antes deste instante (s)')
    sub.add_argument('--plot', action='store_true', help='Gera um gráfico PNG dos atrasos')


def criar_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='edcasim',
        description=f'EdcaSim {VERSAO} - Simulador determinístico de DCF/EDCA',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplos de uso:
  python main.py run --scenario dcf-baseline --stations 2
  python main.py run --scenario saturation --plot
  python main.py sweep --base txop-sweep --reps 3
  python main.py oracle --window 16
        """
    )
    parser.add_argument('--no-banner', action='store_true', help='Não exibir o banner')
    parser.add_argument('-v', '--verbose', action='store_true', help='Mensagens de depuração no stderr')
    subparsers = parser.add_subparsers(dest='comando', required=True)

    run = subparsers.add_parser('run', help='Executa um cenário')
    run.add_argument('--scenario', required=True, help=f"Nome embutido ({', '.join(CENARIOS_EMBUTIDOS)}) ou arquivo YAML")
    run.add_argument('--stations', type=int, default=None, help='Número de estações dos cenários parametrizados')
    run.add_argument('--mac', choices=MODOS_MAC, default=None, help='Sobrescreve o mac_mode do cenário')
    run.add_argument('--trace', action='store_true', help='Grava o rastro de eventos da replicação 0')
    _opcoes_execucao(run)
    run.set_defaults(func=comando_run)

    sweep = subparsers.add_parser('sweep', help='Varre um parâmetro EDCA de uma estação/AC')
    sweep.add_argument('--base', required=True, help='Cenário base (nome ou arquivo)')
    sweep.add_argument('--param', choices=PARAMETROS_SWEEP, default=None, help='Parâmetro varrido')
    sweep.add_argument('--target', default=None, help='Alvo estação:AC, ex.: 1:VI')
    sweep.add_argument('--values', default=None, help='Valores separados por vírgula, ex.: 3,7,12,14')
    _opcoes_execucao(sweep)
    sweep.set_defaults(func=comando_sweep)

    listar = subparsers.add_parser('list-scenarios', help='Lista os cenários embutidos')
    listar.set_defaults(func=comando_listar)

    oracle = subparsers.add_parser('oracle', help='Compara a simulação com o oráculo analítico')
    oracle.add_argument('--window', type=int, default=16, help='Janela de contenção congelada W')
    oracle.add_argument('--rounds', type=int, default=None, help=f'Rodadas de contenção simuladas (padrão: {RODADAS_PADRAO})')
    oracle.add_argument('--workers', type=int, default=None, help='Processos paralelos (padrão: todos os núcleos)')
    oracle.add_argument('--seed', type=int, default=None, help='Semente')
    oracle.set_defaults(func=comando_oracle)

    config = subparsers.add_parser('config', help='Exibe e valida os parâmetros padrão')
    config.set_defaults(func=comando_config)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Função principal; devolve o código de saída."""
    args = criar_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    if not args.no_banner:
        exibir_banner_inicial()

    diario = _diario() if args.comando in ('run', 'sweep') else None
    try:
        return args.func(args, diario)
    except ErroConfiguracao as e:
        print(f"\n{Fore.RED}❌ Configuração inválida: {e}{Style.RESET_ALL}\n", file=sys.stderr)
        if diario:
            diario.registrar_configuracao_invalida(e.mensagem, e.campo, e.linha)
        return SAIDA_CONFIGURACAO
    except OSError as e:
        print(f"\n{Fore.RED}❌ Erro de E/S: {e}{Style.RESET_ALL}\n", file=sys.stderr)
        if diario:
            try:
                diario.registrar_erro_io(e)
            except OSError:
                pass
        return SAIDA_IO
    except KeyboardInterrupt:
        print(f"\n\n{Fore.YELLOW}⚠️  Programa interrompido pelo usuário{Style.RESET_ALL}\n")
        return SAIDA_INTERROMPIDO


if __name__ == "__main__":
    sys.exit(main())

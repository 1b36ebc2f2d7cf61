import requests

BASE = 'https://api.switch-bot.com/v1.1'
HEADERS = {'Authorization': 'token', 'sign': 's', 't': '1700000000', 'nonce': 'n-1'}


def list_scenes():
    response = requests.get(BASE + '/scenes', headers=HEADERS)
    return response.json()
